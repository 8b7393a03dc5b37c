#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "setret/datagen.hpp"
#include "setret/metrics.hpp"
#include "setret/trainer.hpp"

namespace setret {

// One reproducible end-to-end run: data generation, phase-1 fine-tuning per
// requested loss mode, phase-2 dual-encoder training, indexing, retrieval
// and evaluation, and report emission. Every output is a deterministic
// function of (seed, config).
struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::string out_dir;

  GenConfig gen;
  int embed_dim = 64;
  int n_buckets = 32768;

  std::vector<LossMode> loss_modes = {LossMode::inversed_contrastive};
  bool include_untrained = true;
  bool include_bm25 = true;
  bool include_oracle = true;
  bool eval_on_all_queries = false;

  TrainConfig phase1;
  TrainConfig phase2;
  EvalConfig eval;

  ExperimentConfig();
  void validate() const;
};

struct ExperimentResult {
  Benchmark benchmark;
  std::vector<JudgedQuery> eval_queries;
  std::vector<RetrieverRun> runs;
  EvalReport report;
  std::map<std::string, std::string> written_files;  // label -> path

  double avg_recall(const std::string& retriever, int k) const;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

// Stratified per-template query split used between phase-2 training and
// evaluation.
std::pair<std::vector<JudgedQuery>, std::vector<JudgedQuery>> split_queries(
    const std::vector<JudgedQuery>& queries, double ratio, std::uint64_t seed);

}  // namespace setret
