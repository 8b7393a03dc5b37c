#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "setret/corpus.hpp"
#include "setret/types.hpp"
#include "setret/vocab.hpp"

namespace setret {

struct GenConfig {
  std::uint64_t seed = 0;
  int samples_per_op = 2000;
  int n_docs = 500;
  int n_queries_per_template = 20;
  Vocab vocab;  // empty means default_vocab()
  double split_ratio = 0.8;
  int positives_per_sample = 2;
  int negatives_per_sample = 3;

  void validate() const;
};

struct TripletDataset {
  std::vector<TripletSample> samples;
  GenConfig provenance;
};

struct Benchmark {
  std::vector<Document> docs;
  std::vector<JudgedQuery> queries;
};

// Rule-based triplet generation, one block per operation in AND, OR, NOT
// order. Deterministic for a given config. Throws VocabTooSmallError when
// the distinct-phrase constraints cannot be met.
TripletDataset gen_triplets(const GenConfig& cfg);

// Synthetic retrieval benchmark: attribute-tagged documents plus queries
// sampled over all seven templates with exact oracle judgments. Every
// emitted query has at least one relevant document; unsatisfiable draws are
// retried up to a bounded attempt count and then skipped.
Benchmark gen_benchmark(const GenConfig& cfg);

// Exact set-operation evaluation of a query against document attributes.
std::vector<DocId> oracle_answers(const BooleanQuery& q, const Corpus& corpus);

// Per-op stratified split into (train, eval); disjoint and exhaustive.
std::pair<TripletDataset, TripletDataset> split_dataset(const TripletDataset& ds, double ratio,
                                                        std::uint64_t seed);

// Plain-text summary tables.
std::string dataset_stats(const TripletDataset& ds);
std::string benchmark_stats(const Benchmark& bench);

}  // namespace setret
