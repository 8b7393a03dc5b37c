#include "setret/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "setret/errors.hpp"

namespace setret {

bool ranked_list_valid(const RankedList& list) {
  if (static_cast<int>(list.entries.size()) > list.k_requested) return false;
  std::set<DocId> seen;
  for (std::size_t i = 0; i < list.entries.size(); ++i) {
    if (!seen.insert(list.entries[i].doc_id).second) return false;
    if (i > 0 && !outranks(list.entries[i - 1], list.entries[i])) return false;
  }
  return true;
}

RankedList TopKSelector::take(int k_requested) {
  RankedList list;
  list.k_requested = k_requested;
  list.entries.reserve(heap_.size());
  while (!heap_.empty()) {
    list.entries.push_back(heap_.top());
    heap_.pop();
  }
  std::reverse(list.entries.begin(), list.entries.end());
  return list;
}

BM25Index::BM25Index(std::map<std::string, std::vector<std::pair<DocId, int>>> postings,
                     std::vector<int> doc_lengths, BM25Params params)
    : postings_(std::move(postings)), doc_lengths_(std::move(doc_lengths)), params_(params) {
  if (doc_lengths_.empty()) throw Error("BM25 index needs a non-empty corpus");
  long total = 0;
  for (const int len : doc_lengths_) total += len;
  avg_doc_length_ = static_cast<double>(total) / static_cast<double>(doc_lengths_.size());
  for (auto& [term, posting] : postings_) {
    std::sort(posting.begin(), posting.end());
  }
}

const std::vector<std::pair<DocId, int>>* BM25Index::postings_for(const std::string& term) const {
  const auto it = postings_.find(term);
  return it == postings_.end() ? nullptr : &it->second;
}

BM25Index build_bm25(const Corpus& corpus, const Tokenizer& tokenizer, BM25Params params) {
  (void)tokenizer;  // shares the word normalization, which is hash-free
  std::map<std::string, std::vector<std::pair<DocId, int>>> postings;
  std::vector<int> doc_lengths(corpus.size(), 0);
  for (const Document& doc : corpus.docs()) {
    const std::vector<std::string> words = text_words(doc.text);
    doc_lengths[static_cast<std::size_t>(doc.doc_id)] = static_cast<int>(words.size());
    std::map<std::string, int> tf;
    for (const auto& w : words) ++tf[w];
    for (const auto& [term, count] : tf) {
      postings[term].emplace_back(doc.doc_id, count);
    }
  }
  return BM25Index(std::move(postings), std::move(doc_lengths), params);
}

RankedList bm25_search(const BM25Index& index, std::string_view query_text, int k) {
  if (k < 1) throw Error("bm25_search: k must be >= 1");

  std::vector<std::string> terms = text_words(query_text);
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

  const double n = index.n_docs();
  const double k1 = index.params().k1;
  const double b = index.params().b;

  std::map<DocId, double> scores;
  for (const auto& term : terms) {
    const auto* posting = index.postings_for(term);
    if (posting == nullptr) continue;
    const auto df = static_cast<double>(posting->size());
    const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    for (const auto& [doc_id, tf] : *posting) {
      const double dl = index.doc_length(doc_id);
      const double denom = tf + k1 * (1.0 - b + b * dl / index.avg_doc_length());
      scores[doc_id] += idf * tf * (k1 + 1.0) / denom;
    }
  }

  TopKSelector selector(k);
  for (const auto& [doc_id, score] : scores) {
    selector.offer({doc_id, score});
  }
  return selector.take(k);
}

RankedList oracle_search(const BooleanQuery& query, const Corpus& corpus, int k) {
  if (k < 1) throw Error("oracle_search: k must be >= 1");
  const std::vector<DocId> relevant = oracle_answers(query, corpus);
  RankedList list;
  list.k_requested = k;
  const auto take = std::min<std::size_t>(relevant.size(), static_cast<std::size_t>(k));
  list.entries.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    list.entries.push_back({relevant[i], 1.0});
  }
  return list;
}

}  // namespace setret
