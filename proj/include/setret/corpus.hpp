#pragma once

#include <map>
#include <span>
#include <vector>

#include "setret/types.hpp"

namespace setret {

// Immutable document collection with an attribute -> doc_id index.
// Document ids must be dense 0..N-1.
class Corpus {
 public:
  explicit Corpus(std::vector<Document> docs);

  const std::vector<Document>& docs() const { return docs_; }
  std::size_t size() const { return docs_.size(); }
  const Document& doc(DocId id) const { return docs_[static_cast<std::size_t>(id)]; }

  bool has_attribute(const std::string& attr) const;

  // Sorted doc ids carrying the attribute. Throws UnknownAttributeError if
  // no document carries it.
  const std::vector<DocId>& docs_with(const std::string& attr) const;

  // Attribute phrases carried by at least one document, sorted.
  std::vector<std::string> attribute_universe() const;

 private:
  std::vector<Document> docs_;
  std::map<std::string, std::vector<DocId>> attr_docs_;
};

}  // namespace setret
