#include "setret/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "setret/io.hpp"
#include "setret/query.hpp"
#include "setret/retrieval.hpp"
#include "setret/rng.hpp"

namespace setret {

ExperimentConfig::ExperimentConfig() {
  phase2.batch_size = 16;
  phase2.lr_schedule = LrSchedule::linear_decay;
}

void ExperimentConfig::validate() const {
  if (out_dir.empty()) throw Error("experiment needs an output directory");
  if (gen.vocab.size() == 0) {
    GenConfig filled = gen;
    filled.vocab = default_vocab();
    filled.validate();
  } else {
    gen.validate();
  }
  phase1.validate();
  phase2.validate();
  eval.validate();
  if (loss_modes.empty() && !include_untrained && !include_bm25 && !include_oracle) {
    throw Error("experiment has no retrievers to evaluate");
  }
  if (embed_dim < 2) throw Error("embed_dim must be >= 2");
}

double ExperimentResult::avg_recall(const std::string& retriever, int k) const {
  for (std::size_t r = 0; r < report.retrievers.size(); ++r) {
    if (report.retrievers[r] != retriever) continue;
    for (std::size_t i = 0; i < report.k_values.size(); ++i) {
      if (report.k_values[i] == k) return report.avg_recall[r][i];
    }
    throw Error("k value not in report: " + std::to_string(k));
  }
  throw Error("retriever not in report: " + retriever);
}

std::pair<std::vector<JudgedQuery>, std::vector<JudgedQuery>> split_queries(
    const std::vector<JudgedQuery>& queries, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error("split ratio must be in (0,1)");
  std::vector<JudgedQuery> train, eval;
  for (const TemplateId tmpl : kAllTemplates) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      if (queries[i].query.template_id() == tmpl) idx.push_back(i);
    }
    if (idx.empty()) continue;
    Rng rng(derive_seed(seed, "query-split-" + std::string(template_label(tmpl))));
    rng.shuffle(idx);
    const auto n_train =
        static_cast<std::size_t>(std::llround(ratio * static_cast<double>(idx.size())));
    std::vector<std::size_t> train_idx(idx.begin(),
                                       idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> eval_idx(idx.begin() + static_cast<std::ptrdiff_t>(n_train),
                                      idx.end());
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(eval_idx.begin(), eval_idx.end());
    for (const std::size_t i : train_idx) train.push_back(queries[i]);
    for (const std::size_t i : eval_idx) eval.push_back(queries[i]);
  }
  return {std::move(train), std::move(eval)};
}

namespace {

struct DenseArm {
  std::string name;
  DualEncoder<double> dual;
  std::string phase1_log;
  std::string phase2_log;
  bool has_phase1 = false;
  EncoderParams<double> phase1_params;
};

void log_line(std::ostream* log, const std::string& line) {
  if (log != nullptr) *log << line << '\n';
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.validate();

  GenConfig gen = cfg.gen;
  gen.seed = cfg.seed;
  if (gen.vocab.size() == 0) gen.vocab = default_vocab();

  log_line(log, "generating triplet dataset");
  const TripletDataset dataset = gen_triplets(gen);
  const auto [train_ds, eval_ds] =
      split_dataset(dataset, gen.split_ratio, derive_seed(cfg.seed, "split"));

  log_line(log, "generating benchmark");
  Benchmark bench = gen_benchmark(gen);
  const Corpus corpus(bench.docs);
  auto [train_q, eval_q] =
      split_queries(bench.queries, gen.split_ratio, derive_seed(cfg.seed, "query-split"));

  const Tokenizer tokenizer(cfg.n_buckets);
  const EncoderParams<double> init =
      init_params<double>(derive_seed(cfg.seed, "init"), cfg.embed_dim, cfg.n_buckets);

  std::vector<DenseArm> arms;
  if (cfg.include_untrained) {
    DenseArm arm;
    arm.name = "de_untrained";
    std::ostringstream p2log;
    TrainConfig phase2 = cfg.phase2;
    phase2.loss_mode = LossMode::contrastive;
    phase2.seed = derive_seed(cfg.seed, "phase2");
    log_line(log, "phase 2: de_untrained");
    arm.dual = train_phase2_de<double>(corpus, train_q, eval_q, tokenizer, make_dual(init),
                                       phase2, &p2log)
                   .dual;
    arm.phase2_log = p2log.str();
    arms.push_back(std::move(arm));
  }
  for (const LossMode mode : cfg.loss_modes) {
    DenseArm arm;
    arm.name = "de_" + std::string(loss_mode_label(mode));
    TrainConfig phase1 = cfg.phase1;
    phase1.loss_mode = mode;
    phase1.seed = derive_seed(cfg.seed, "phase1");
    std::ostringstream p1log;
    log_line(log, "phase 1: " + arm.name);
    const auto ckpt =
        train_phase1<double>(train_ds.samples, eval_ds.samples, tokenizer, init, phase1, &p1log);
    arm.phase1_log = p1log.str();
    arm.has_phase1 = true;
    arm.phase1_params = ckpt.params;

    TrainConfig phase2 = cfg.phase2;
    phase2.loss_mode = LossMode::contrastive;
    phase2.seed = derive_seed(cfg.seed, "phase2");
    std::ostringstream p2log;
    log_line(log, "phase 2: " + arm.name);
    arm.dual = train_phase2_de<double>(corpus, train_q, eval_q, tokenizer,
                                       make_dual(ckpt.params), phase2, &p2log)
                   .dual;
    arm.phase2_log = p2log.str();
    arms.push_back(std::move(arm));
  }

  const std::vector<JudgedQuery>& queries = cfg.eval_on_all_queries ? bench.queries : eval_q;
  if (queries.empty()) throw Error("no queries left to evaluate");

  log_line(log, "evaluating retrievers over " + std::to_string(queries.size()) + " queries");
  const int max_k = cfg.eval.max_k();
  std::vector<RetrieverRun> runs;

  if (cfg.include_bm25) {
    const BM25Index bm25 = build_bm25(corpus, tokenizer);
    RetrieverRun run;
    run.name = "bm25";
    for (const auto& q : queries) {
      run.per_query.push_back(evaluate_query(q, bm25_search(bm25, q.text, max_k), cfg.eval));
    }
    runs.push_back(std::move(run));
  }
  for (const DenseArm& arm : arms) {
    const DenseIndex<double> index = embed_corpus(arm.dual.doc_params, corpus, tokenizer);
    RetrieverRun run;
    run.name = arm.name;
    for (const auto& q : queries) {
      run.per_query.push_back(evaluate_query(
          q, dense_search(arm.dual.query_params, q.text, tokenizer, index, max_k), cfg.eval));
    }
    runs.push_back(std::move(run));
  }
  if (cfg.include_oracle) {
    RetrieverRun run;
    run.name = "oracle";
    for (const auto& q : queries) {
      run.per_query.push_back(evaluate_query(q, oracle_search(q.query, corpus, max_k), cfg.eval));
    }
    runs.push_back(std::move(run));
  }

  ExperimentResult result;
  result.report = aggregate(runs, cfg.eval);
  result.eval_queries = queries;
  result.runs = std::move(runs);

  // Everything is computed; only now touch the output directory.
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const auto path = [&](const std::string& name) { return (fs::path(cfg.out_dir) / name).string(); };

  write_triplets(path("triplets.jsonl"), dataset.samples);
  result.written_files["triplets"] = path("triplets.jsonl");
  write_corpus(path("corpus.jsonl"), bench.docs);
  result.written_files["corpus"] = path("corpus.jsonl");
  write_queries(path("queries.jsonl"), bench.queries);
  result.written_files["queries"] = path("queries.jsonl");

  for (const DenseArm& arm : arms) {
    if (arm.has_phase1) {
      const std::string p1 = path("checkpoint_phase1_" + arm.name.substr(3) + ".bin");
      save_encoder(p1, arm.phase1_params);
      result.written_files["phase1_" + arm.name] = p1;
      write_text_file(path("metrics_phase1_" + arm.name.substr(3) + ".tsv"), arm.phase1_log);
    }
    const std::string p2 = path("checkpoint_" + arm.name + ".bin");
    save_dual_encoder(p2, arm.dual);
    result.written_files[arm.name] = p2;
    write_text_file(path("metrics_phase2_" + arm.name + ".tsv"), arm.phase2_log);
  }

  const std::string report_tsv = emit_report(result.report, ReportFormat::tsv);
  const std::string report_md = emit_report(result.report, ReportFormat::markdown);
  const std::string per_query = emit_per_query(result.runs, cfg.eval);
  write_text_file(path("report.tsv"), report_tsv);
  write_text_file(path("report.md"), report_md);
  write_text_file(path("per_query.tsv"), per_query);
  result.written_files["report_tsv"] = path("report.tsv");
  result.written_files["report_md"] = path("report.md");
  result.written_files["per_query"] = path("per_query.tsv");

  result.benchmark = std::move(bench);
  log_line(log, "done; report at " + path("report.md"));
  return result;
}

}  // namespace setret
