#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace setret {

// One attribute phrase. Entries sharing a group id are near-synonyms /
// paraphrases of the same concept and are never contrasted against each
// other during generation.
struct VocabEntry {
  std::string phrase;
  int group = 0;
};

class Vocab {
 public:
  Vocab() = default;
  explicit Vocab(std::vector<VocabEntry> entries);

  const std::vector<VocabEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  int group_of(std::size_t index) const { return entries_[index].group; }
  const std::string& phrase(std::size_t index) const { return entries_[index].phrase; }

 private:
  std::vector<VocabEntry> entries_;
};

// Built-in attribute phrase bank used when no vocab file is given.
Vocab default_vocab();

// One phrase per line, optionally "phrase<TAB>group-name". Lines sharing a
// group name form a synonym group; bare lines get singleton groups.
Vocab load_vocab(const std::string& path);

}  // namespace setret
