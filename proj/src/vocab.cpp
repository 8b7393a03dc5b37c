#include "setret/vocab.hpp"

#include <fstream>
#include <map>
#include <set>

#include "setret/errors.hpp"
#include "setret/types.hpp"

namespace setret {

Vocab::Vocab(std::vector<VocabEntry> entries) : entries_(std::move(entries)) {
  std::set<std::string> seen;
  for (auto& e : entries_) {
    e.phrase = Atom(e.phrase).text();  // normalize + reject connective words
    if (!seen.insert(e.phrase).second) {
      throw Error("duplicate vocab phrase: \"" + e.phrase + "\"");
    }
  }
}

Vocab default_vocab() {
  // Paired lines are paraphrases of one concept; the rest are singletons.
  // Phrases are kept pairwise substring-free so that containment checks on
  // generated sentences stay unambiguous.
  static const std::vector<std::pair<const char*, const char*>> kGrouped = {
      {"french dramas", "dramas from france"},
      {"british historical dramas", "historical dramas from britain"},
      {"1960s historical films", "historical films of the 1960s"},
      {"films set in vietnam", "movies about vietnam"},
      {"war documentaries", "documentaries about warfare"},
      {"romantic comedies", "lighthearted romance films"},
      {"space operas", "epic science fiction sagas"},
      {"dystopian novels", "novels about dystopias"},
      {"noir thrillers", "dark crime thrillers"},
      {"silent era classics", "classics of the silent era"},
      {"animated family features", "family cartoon features"},
      {"japanese horror films", "horror cinema from japan"},
      {"spaghetti westerns", "italian westerns of the 1960s"},
      {"biographies of scientists", "scientist life stories"},
      {"novels by russian authors", "russian literary fiction"},
      {"poetry collections", "collected poems"},
      {"books about the great recession", "great recession nonfiction"},
      {"travel memoirs", "memoirs about travel"},
      {"cookbooks for beginners", "beginner cooking guides"},
      {"birds endemic to brazil", "brazilian endemic birds"},
      {"mammals of the arctic", "arctic mammal species"},
      {"reptiles found in mexico", "mexican reptile species"},
      {"documentaries about volcanoes", "volcano films"},
      {"films about chess prodigies", "chess prodigy movies"},
  };
  static const std::vector<const char*> kSingles = {
      "korean street food guides",     "minimalist architecture surveys",
      "baroque music recordings",      "jazz piano albums",
      "marathon training manuals",     "urban gardening handbooks",
      "vintage motorcycle catalogs",   "deep sea photography books",
      "medieval castle histories",     "polar expedition accounts",
      "wildlife rescue stories",       "desert survival guides",
  };

  std::vector<VocabEntry> entries;
  int group = 0;
  for (const auto& [a, b] : kGrouped) {
    entries.push_back({a, group});
    entries.push_back({b, group});
    ++group;
  }
  for (const char* p : kSingles) {
    entries.push_back({p, group++});
  }
  return Vocab(std::move(entries));
}

Vocab load_vocab(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocab file: " + path);

  std::vector<VocabEntry> entries;
  std::map<std::string, int> named_groups;
  int next_group = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      entries.push_back({line, next_group++});
    } else {
      const std::string phrase = line.substr(0, tab);
      const std::string group_name = line.substr(tab + 1);
      auto [it, inserted] = named_groups.try_emplace(group_name, next_group);
      if (inserted) ++next_group;
      entries.push_back({phrase, it->second});
    }
  }
  return Vocab(std::move(entries));
}

}  // namespace setret
