#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace setret {

// Lowercased ASCII-alphanumeric words, split on everything else.
std::vector<std::string> text_words(std::string_view text);

// Feature-hashing tokenizer: words are hashed into a fixed bucket table.
// Collisions are accepted; there is no out-of-vocabulary handling.
class Tokenizer {
 public:
  static constexpr int kMaxQueryTokens = 64;
  static constexpr int kMaxDocTokens = 256;

  explicit Tokenizer(int n_buckets = 32768);

  // Hashed ids in [0, n_buckets), truncated to max_len words.
  std::vector<int> tokenize(std::string_view text, int max_len) const;
  std::vector<int> tokenize_query(std::string_view text) const {
    return tokenize(text, kMaxQueryTokens);
  }
  std::vector<int> tokenize_document(std::string_view text) const {
    return tokenize(text, kMaxDocTokens);
  }

  int n_buckets() const { return n_buckets_; }

 private:
  int n_buckets_;
};

}  // namespace setret
