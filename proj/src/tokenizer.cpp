#include "setret/tokenizer.hpp"

#include <cctype>

#include "setret/errors.hpp"
#include "setret/rng.hpp"

namespace setret {

std::vector<std::string> text_words(std::string_view text) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : text) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) {
      cur.push_back(static_cast<char>(std::tolower(uc)));
    } else if (!cur.empty()) {
      words.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(cur);
  return words;
}

Tokenizer::Tokenizer(int n_buckets) : n_buckets_(n_buckets) {
  if (n_buckets < 2 || (n_buckets & (n_buckets - 1)) != 0) {
    throw Error("tokenizer bucket count must be a power of two >= 2, got " +
                std::to_string(n_buckets));
  }
}

std::vector<int> Tokenizer::tokenize(std::string_view text, int max_len) const {
  std::vector<int> ids;
  const std::vector<std::string> words = text_words(text);
  const auto n = std::min<std::size_t>(words.size(), static_cast<std::size_t>(max_len));
  ids.reserve(n);
  const auto mask = static_cast<std::uint64_t>(n_buckets_ - 1);
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back(static_cast<int>(fnv1a64(words[i]) & mask));
  }
  return ids;
}

}  // namespace setret
