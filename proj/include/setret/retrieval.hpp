#pragma once

#include <map>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "setret/corpus.hpp"
#include "setret/datagen.hpp"
#include "setret/dense.hpp"
#include "setret/encoder.hpp"
#include "setret/tokenizer.hpp"

namespace setret {

struct ScoredDoc {
  DocId doc_id = 0;
  double score = 0.0;
};

// Descending score, ties broken by ascending doc_id; at most k_requested
// entries, no duplicates.
struct RankedList {
  std::vector<ScoredDoc> entries;
  int k_requested = 0;
};

bool ranked_list_valid(const RankedList& list);

// a outranks b under (-score, doc_id).
inline bool outranks(const ScoredDoc& a, const ScoredDoc& b) {
  return a.score > b.score || (a.score == b.score && a.doc_id < b.doc_id);
}

// Fixed-capacity selection of the K best entries; O(K) memory.
class TopKSelector {
 public:
  explicit TopKSelector(int k) : k_(k) {}

  void offer(const ScoredDoc& candidate) {
    if (static_cast<int>(heap_.size()) < k_) {
      heap_.push(candidate);
    } else if (outranks(candidate, heap_.top())) {
      heap_.pop();
      heap_.push(candidate);
    }
  }

  RankedList take(int k_requested);

 private:
  struct WorstOnTop {
    bool operator()(const ScoredDoc& a, const ScoredDoc& b) const { return outranks(a, b); }
  };
  int k_;
  std::priority_queue<ScoredDoc, std::vector<ScoredDoc>, WorstOnTop> heap_;
};

struct BM25Params {
  double k1 = 1.2;
  double b = 0.75;
};

class BM25Index {
 public:
  BM25Index(std::map<std::string, std::vector<std::pair<DocId, int>>> postings,
            std::vector<int> doc_lengths, BM25Params params);

  const std::vector<std::pair<DocId, int>>* postings_for(const std::string& term) const;
  int doc_length(DocId id) const { return doc_lengths_[static_cast<std::size_t>(id)]; }
  double avg_doc_length() const { return avg_doc_length_; }
  int n_docs() const { return static_cast<int>(doc_lengths_.size()); }
  const BM25Params& params() const { return params_; }

 private:
  std::map<std::string, std::vector<std::pair<DocId, int>>> postings_;
  std::vector<int> doc_lengths_;
  double avg_doc_length_ = 0.0;
  BM25Params params_;
};

// Indexes document text words (titles are display-only).
BM25Index build_bm25(const Corpus& corpus, const Tokenizer& tokenizer, BM25Params params = {});

// Robertson-Zaragoza scoring with idf(t) = ln(1 + (N - df + 0.5)/(df + 0.5)).
// Only documents containing at least one query term are scored.
RankedList bm25_search(const BM25Index& index, std::string_view query_text, int k);

template <typename Scalar>
struct DenseIndex {
  MatX<Scalar> doc_embeddings;  // n_docs x d, row i = document i
  std::vector<DocId> doc_ids;
};

template <typename Scalar>
DenseIndex<Scalar> embed_corpus(const EncoderParams<Scalar>& doc_params, const Corpus& corpus,
                                const Tokenizer& tokenizer) {
  DenseIndex<Scalar> index;
  index.doc_embeddings.resize(static_cast<Index>(corpus.size()), doc_params.dim());
  index.doc_ids.reserve(corpus.size());
  for (const Document& doc : corpus.docs()) {
    const std::vector<int> ids = tokenizer.tokenize_document(doc.text);
    index.doc_embeddings.row(static_cast<Index>(doc.doc_id)) =
        encode(doc_params, std::span<const int>(ids)).transpose();
    index.doc_ids.push_back(doc.doc_id);
  }
  return index;
}

// Exact top-k by dot product over every row; O(k) selection memory.
template <typename Scalar>
RankedList dense_topk(const DenseIndex<Scalar>& index, const VecX<Scalar>& query_embedding,
                      int k) {
  if (k < 1) throw Error("dense search: k must be >= 1");
  TopKSelector selector(k);
  for (Index row = 0; row < index.doc_embeddings.rows(); ++row) {
    const auto score =
        static_cast<double>(index.doc_embeddings.row(row).dot(query_embedding.transpose()));
    selector.offer({index.doc_ids[static_cast<std::size_t>(row)], score});
  }
  return selector.take(k);
}

template <typename Scalar>
RankedList dense_search(const EncoderParams<Scalar>& query_params, std::string_view query_text,
                        const Tokenizer& tokenizer, const DenseIndex<Scalar>& index, int k) {
  const std::vector<int> ids = tokenizer.tokenize_query(query_text);
  return dense_topk(index, encode(query_params, std::span<const int>(ids)), k);
}

// Every oracle-relevant document with score 1.0 in doc_id order, cut to k.
RankedList oracle_search(const BooleanQuery& query, const Corpus& corpus, int k);

}  // namespace setret
