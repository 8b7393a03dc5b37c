#include "setret/corpus.hpp"

#include <algorithm>

#include "setret/errors.hpp"

namespace setret {

Corpus::Corpus(std::vector<Document> docs) : docs_(std::move(docs)) {
  std::sort(docs_.begin(), docs_.end(),
            [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    if (docs_[i].doc_id != static_cast<DocId>(i)) {
      throw Error("document ids must be dense 0..N-1; hole or duplicate at " +
                  std::to_string(i));
    }
    if (docs_[i].attributes.empty()) {
      throw Error("document " + std::to_string(i) + " has no attributes");
    }
    for (const auto& attr : docs_[i].attributes) {
      attr_docs_[attr].push_back(docs_[i].doc_id);
    }
  }
  for (auto& [attr, ids] : attr_docs_) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
}

bool Corpus::has_attribute(const std::string& attr) const {
  return attr_docs_.contains(attr);
}

const std::vector<DocId>& Corpus::docs_with(const std::string& attr) const {
  const auto it = attr_docs_.find(attr);
  if (it == attr_docs_.end()) {
    throw UnknownAttributeError("no document carries attribute: \"" + attr + "\"");
  }
  return it->second;
}

std::vector<std::string> Corpus::attribute_universe() const {
  std::vector<std::string> attrs;
  attrs.reserve(attr_docs_.size());
  for (const auto& [attr, ids] : attr_docs_) attrs.push_back(attr);
  return attrs;
}

}  // namespace setret
