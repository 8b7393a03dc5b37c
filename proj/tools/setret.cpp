// Command-line front end wiring data generation, training, indexing,
// search, and evaluation into reproducible experiments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "setret/datagen.hpp"
#include "setret/experiment.hpp"
#include "setret/io.hpp"
#include "setret/metrics.hpp"
#include "setret/query.hpp"
#include "setret/retrieval.hpp"
#include "setret/rng.hpp"
#include "setret/trainer.hpp"

namespace {

using namespace setret;

Vocab vocab_or_default(const std::string& path) {
  return path.empty() ? default_vocab() : load_vocab(path);
}

void print_ranked(const RankedList& list, const Corpus& corpus) {
  for (const auto& e : list.entries) {
    std::printf("%d\t%.6f\t%s\n", e.doc_id, e.score,
                corpus.doc(e.doc_id).title.c_str());
  }
}

struct GenDataOpts {
  std::uint64_t seed = 0;
  int per_op = 2000;
  int positives = 2;
  int negatives = 3;
  std::string vocab_path;
  std::string out = "triplets.jsonl";
};

int run_gen_data(const GenDataOpts& o) {
  GenConfig cfg;
  cfg.seed = o.seed;
  cfg.samples_per_op = o.per_op;
  cfg.positives_per_sample = o.positives;
  cfg.negatives_per_sample = o.negatives;
  cfg.vocab = vocab_or_default(o.vocab_path);
  cfg.validate();
  const TripletDataset ds = gen_triplets(cfg);
  write_triplets(o.out, ds.samples);
  std::cout << dataset_stats(ds);
  std::cerr << "wrote " << ds.samples.size() << " samples to " << o.out << "\n";
  return 0;
}

struct GenBenchOpts {
  std::uint64_t seed = 0;
  int docs = 500;
  int queries_per_template = 20;
  std::string vocab_path;
  std::string out_corpus = "corpus.jsonl";
  std::string out_queries = "queries.jsonl";
};

int run_gen_bench(const GenBenchOpts& o) {
  GenConfig cfg;
  cfg.seed = o.seed;
  cfg.n_docs = o.docs;
  cfg.n_queries_per_template = o.queries_per_template;
  cfg.vocab = vocab_or_default(o.vocab_path);
  cfg.validate();
  const Benchmark bench = gen_benchmark(cfg);
  write_corpus(o.out_corpus, bench.docs);
  write_queries(o.out_queries, bench.queries);
  std::cout << benchmark_stats(bench);
  std::cerr << "wrote " << bench.docs.size() << " docs to " << o.out_corpus << " and "
            << bench.queries.size() << " queries to " << o.out_queries << "\n";
  return 0;
}

struct TrainOpts {
  int phase = 1;
  std::uint64_t seed = 0;
  std::string dataset;
  std::string corpus;
  std::string queries;
  std::string init_checkpoint;
  std::string loss = "inversed_contrastive";
  double split_ratio = 0.8;
  int epochs = 10;
  int batch = 0;  // 0 = phase default
  double lr = 1e-3;
  int eval_every = 200;
  int steps = 1600;
  int negatives = 5;
  int dim = 64;
  int buckets = 32768;
  std::string out = "checkpoint.bin";
  std::string log_path;
};

int run_train(const TrainOpts& o) {
  TrainConfig cfg;
  cfg.loss_mode = loss_mode_from_label(o.loss);
  cfg.epochs = o.epochs;
  cfg.batch_size = o.batch > 0 ? o.batch : (o.phase == 1 ? 64 : 16);
  cfg.lr = o.lr;
  cfg.eval_every_steps = o.eval_every;
  cfg.max_steps_phase2 = o.steps;
  cfg.negatives_per_query = o.negatives;
  cfg.seed = derive_seed(o.seed, o.phase == 1 ? "phase1" : "phase2");
  cfg.validate();

  std::ostringstream log;
  if (o.phase == 1) {
    TripletDataset ds;
    ds.samples = read_triplets(o.dataset);
    const auto [train_split, eval_split] =
        split_dataset(ds, o.split_ratio, derive_seed(o.seed, "split"));
    EncoderParams<double> init =
        o.init_checkpoint.empty()
            ? init_params<double>(derive_seed(o.seed, "init"), o.dim, o.buckets)
            : load_encoder(o.init_checkpoint);
    const Tokenizer tokenizer(static_cast<int>(init.n_buckets()));
    const auto ckpt = train_phase1<double>(train_split.samples, eval_split.samples, tokenizer,
                                           std::move(init), cfg, &log);
    save_encoder(o.out, ckpt.params);
    std::cout << "best step " << ckpt.step << " eval_loss " << ckpt.eval_loss << "\n";
  } else {
    const Corpus corpus(read_corpus(o.corpus));
    const auto queries = read_queries(o.queries);
    const auto [train_q, eval_q] =
        split_queries(queries, o.split_ratio, derive_seed(o.seed, "query-split"));
    cfg.lr_schedule = LrSchedule::linear_decay;
    DualEncoder<double> init;
    if (o.init_checkpoint.empty()) {
      init = make_dual(init_params<double>(derive_seed(o.seed, "init"), o.dim, o.buckets));
    } else {
      try {
        init = load_dual_encoder(o.init_checkpoint);
      } catch (const IoError&) {
        init = make_dual(load_encoder(o.init_checkpoint));
      }
    }
    const Tokenizer tokenizer(static_cast<int>(init.query_params.n_buckets()));
    const auto ckpt =
        train_phase2_de<double>(corpus, train_q, eval_q, tokenizer, std::move(init), cfg, &log);
    save_dual_encoder(o.out, ckpt.dual);
    std::cout << "best step " << ckpt.step << " eval_loss " << ckpt.eval_loss << "\n";
  }
  if (!o.log_path.empty()) write_text_file(o.log_path, log.str());
  return 0;
}

struct IndexOpts {
  std::string checkpoint;
  std::string corpus;
  std::string out = "dense_index.bin";
};

int run_index(const IndexOpts& o) {
  const Corpus corpus(read_corpus(o.corpus));
  EncoderParams<double> doc_params;
  try {
    doc_params = load_dual_encoder(o.checkpoint).doc_params;
  } catch (const IoError&) {
    doc_params = load_encoder(o.checkpoint);
  }
  const Tokenizer tokenizer(static_cast<int>(doc_params.n_buckets()));
  save_dense_index(o.out, embed_corpus(doc_params, corpus, tokenizer));
  std::cerr << "indexed " << corpus.size() << " documents into " << o.out << "\n";
  return 0;
}

struct SearchOpts {
  std::string mode = "bm25";
  std::string corpus;
  std::string checkpoint;
  std::string index;
  std::string query;
  int k = 10;
};

int run_search(const SearchOpts& o) {
  const Corpus corpus(read_corpus(o.corpus));
  if (o.mode == "bm25") {
    const Tokenizer tokenizer;
    print_ranked(bm25_search(build_bm25(corpus, tokenizer), o.query, o.k), corpus);
  } else if (o.mode == "dense") {
    if (o.checkpoint.empty()) throw Error("dense search needs --checkpoint");
    const DualEncoder<double> dual = load_dual_encoder(o.checkpoint);
    const Tokenizer tokenizer(static_cast<int>(dual.query_params.n_buckets()));
    const DenseIndex<double> index = o.index.empty()
                                         ? embed_corpus(dual.doc_params, corpus, tokenizer)
                                         : load_dense_index(o.index);
    print_ranked(dense_search(dual.query_params, o.query, tokenizer, index, o.k), corpus);
  } else if (o.mode == "oracle") {
    print_ranked(oracle_search(parse_query(o.query), corpus, o.k), corpus);
  } else {
    throw Error("unknown search mode: " + o.mode);
  }
  return 0;
}

struct EvalOpts {
  std::string corpus;
  std::string queries;
  std::string checkpoint;
  std::vector<int> k_values = {1, 5, 10, 100};
  bool no_bm25 = false;
  bool no_oracle = false;
  std::string out_tsv;
  std::string out_md;
  std::string out_per_query;
};

int run_eval(const EvalOpts& o) {
  const Corpus corpus(read_corpus(o.corpus));
  const auto queries = read_queries(o.queries);
  if (queries.empty()) throw Error("query file is empty: " + o.queries);
  EvalConfig eval;
  eval.k_values = o.k_values;
  eval.validate();
  const int max_k = eval.max_k();

  std::vector<RetrieverRun> runs;
  if (!o.no_bm25) {
    const Tokenizer tokenizer;
    const BM25Index bm25 = build_bm25(corpus, tokenizer);
    RetrieverRun run{"bm25", {}};
    for (const auto& q : queries) {
      run.per_query.push_back(evaluate_query(q, bm25_search(bm25, q.text, max_k), eval));
    }
    runs.push_back(std::move(run));
  }
  if (!o.checkpoint.empty()) {
    const DualEncoder<double> dual = load_dual_encoder(o.checkpoint);
    const Tokenizer tokenizer(static_cast<int>(dual.query_params.n_buckets()));
    const DenseIndex<double> index = embed_corpus(dual.doc_params, corpus, tokenizer);
    RetrieverRun run{"dense", {}};
    for (const auto& q : queries) {
      run.per_query.push_back(
          evaluate_query(q, dense_search(dual.query_params, q.text, tokenizer, index, max_k), eval));
    }
    runs.push_back(std::move(run));
  }
  if (!o.no_oracle) {
    RetrieverRun run{"oracle", {}};
    for (const auto& q : queries) {
      run.per_query.push_back(evaluate_query(q, oracle_search(q.query, corpus, max_k), eval));
    }
    runs.push_back(std::move(run));
  }
  if (runs.empty()) throw Error("no retrievers selected");

  const EvalReport report = aggregate(runs, eval);
  std::cout << emit_report(report, ReportFormat::tsv);
  if (!o.out_tsv.empty()) write_text_file(o.out_tsv, emit_report(report, ReportFormat::tsv));
  if (!o.out_md.empty()) write_text_file(o.out_md, emit_report(report, ReportFormat::markdown));
  if (!o.out_per_query.empty()) write_text_file(o.out_per_query, emit_per_query(runs, eval));
  return 0;
}

struct ExperimentOpts {
  std::uint64_t seed = 0;
  std::string out_dir = "experiment_out";
  std::string vocab_path;
  int per_op = 2000;
  int docs = 500;
  int queries_per_template = 20;
  int dim = 64;
  int buckets = 8192;
  std::vector<std::string> loss_modes = {"inversed_contrastive"};
  int epochs = 10;
  int batch1 = 64;
  double lr1 = 1e-3;
  int steps2 = 400;
  int batch2 = 16;
  double lr2 = 1e-3;
  int eval_every = 200;
  std::vector<int> k_values = {1, 5, 10, 100};
  bool eval_on_all = false;
  bool no_untrained = false;
  bool no_bm25 = false;
  bool no_oracle = false;
};

int run_experiment_cmd(const ExperimentOpts& o) {
  ExperimentConfig cfg;
  cfg.seed = o.seed;
  cfg.out_dir = o.out_dir;
  cfg.gen.samples_per_op = o.per_op;
  cfg.gen.n_docs = o.docs;
  cfg.gen.n_queries_per_template = o.queries_per_template;
  cfg.gen.vocab = vocab_or_default(o.vocab_path);
  cfg.embed_dim = o.dim;
  cfg.n_buckets = o.buckets;
  cfg.loss_modes.clear();
  for (const auto& label : o.loss_modes) cfg.loss_modes.push_back(loss_mode_from_label(label));
  cfg.include_untrained = !o.no_untrained;
  cfg.include_bm25 = !o.no_bm25;
  cfg.include_oracle = !o.no_oracle;
  cfg.eval_on_all_queries = o.eval_on_all;
  cfg.phase1.epochs = o.epochs;
  cfg.phase1.batch_size = o.batch1;
  cfg.phase1.lr = o.lr1;
  cfg.phase1.eval_every_steps = o.eval_every;
  cfg.phase2.max_steps_phase2 = o.steps2;
  cfg.phase2.batch_size = o.batch2;
  cfg.phase2.lr = o.lr2;
  cfg.phase2.eval_every_steps = o.eval_every;
  cfg.eval.k_values = o.k_values;

  const ExperimentResult result = run_experiment(cfg, &std::cerr);
  std::cout << emit_report(result.report, ReportFormat::tsv);
  return 0;
}

struct ReportOpts {
  std::string per_query;
  std::string format = "markdown";
  std::string out;
};

int run_report(const ReportOpts& o) {
  std::ifstream in(o.per_query);
  if (!in) throw IoError("cannot open per-query dump: " + o.per_query);

  std::string header;
  if (!std::getline(in, header)) throw IoError("empty per-query dump: " + o.per_query);
  std::vector<std::string> cols;
  {
    std::istringstream hs(header);
    std::string col;
    while (std::getline(hs, col, '\t')) cols.push_back(col);
  }
  EvalConfig eval;
  eval.k_values.clear();
  for (const auto& col : cols) {
    if (col.rfind("recall@", 0) == 0) eval.k_values.push_back(std::stoi(col.substr(7)));
  }
  eval.validate();
  const std::size_t nk = eval.k_values.size();
  if (cols.size() != 3 + 2 * nk) throw IoError("unexpected per-query dump header");

  std::vector<RetrieverRun> runs;
  std::map<std::string, std::size_t> run_index;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<std::string> fields;
    std::string field;
    while (std::getline(ls, field, '\t')) fields.push_back(field);
    if (fields.size() != cols.size()) {
      throw IoError(o.per_query + ":" + std::to_string(line_no) + ": malformed row");
    }
    auto [it, inserted] = run_index.try_emplace(fields[0], runs.size());
    if (inserted) runs.push_back({fields[0], {}});
    PerQueryMetrics m;
    m.query_id = std::stoi(fields[1]);
    m.template_id = template_from_label(fields[2]);
    for (std::size_t i = 0; i < nk; ++i) {
      m.recall.push_back(std::stod(fields[3 + i]));
      m.mrecall.push_back(std::stoi(fields[3 + nk + i]));
    }
    runs[it->second].per_query.push_back(std::move(m));
  }
  if (runs.empty()) throw IoError("per-query dump has no rows: " + o.per_query);

  const EvalReport report = aggregate(runs, eval);
  const ReportFormat format =
      o.format == "tsv" ? ReportFormat::tsv : ReportFormat::markdown;
  const std::string text = emit_report(report, format);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(o.out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boolean set-operation retrieval toolkit"};
  app.require_subcommand(1);
  app.set_config("--config");

  GenDataOpts gen_data;
  auto* sub_gen = app.add_subcommand("gen-data", "generate a triplet training dataset");
  sub_gen->add_option("--seed", gen_data.seed, "root seed");
  sub_gen->add_option("--per-op", gen_data.per_op, "samples per operation");
  sub_gen->add_option("--pos", gen_data.positives, "positives per sample");
  sub_gen->add_option("--neg", gen_data.negatives, "negatives per sample");
  sub_gen->add_option("--vocab", gen_data.vocab_path, "vocab file")->check(CLI::ExistingFile);
  sub_gen->add_option("--out", gen_data.out, "output dataset path");

  GenBenchOpts gen_bench;
  auto* sub_bench = app.add_subcommand("gen-bench", "generate a synthetic retrieval benchmark");
  sub_bench->add_option("--seed", gen_bench.seed, "root seed");
  sub_bench->add_option("--docs", gen_bench.docs, "number of documents");
  sub_bench->add_option("--queries-per-template", gen_bench.queries_per_template,
                        "queries per template");
  sub_bench->add_option("--vocab", gen_bench.vocab_path, "vocab file")->check(CLI::ExistingFile);
  sub_bench->add_option("--out-corpus", gen_bench.out_corpus, "corpus output path");
  sub_bench->add_option("--out-queries", gen_bench.out_queries, "queries output path");

  TrainOpts train;
  auto* sub_train = app.add_subcommand("train", "train the encoder (phase 1) or the dual encoder (phase 2)");
  sub_train->add_option("--phase", train.phase, "1 or 2")->check(CLI::Range(1, 2));
  sub_train->add_option("--seed", train.seed, "root seed");
  sub_train->add_option("--dataset", train.dataset, "triplet dataset (phase 1)")
      ->check(CLI::ExistingFile);
  sub_train->add_option("--corpus", train.corpus, "corpus file (phase 2)")
      ->check(CLI::ExistingFile);
  sub_train->add_option("--queries", train.queries, "judged queries (phase 2)")
      ->check(CLI::ExistingFile);
  sub_train->add_option("--init", train.init_checkpoint, "initial checkpoint")
      ->check(CLI::ExistingFile);
  sub_train->add_option("--loss", train.loss,
                        "inversed_contrastive | triplet | contrastive");
  sub_train->add_option("--split-ratio", train.split_ratio, "train fraction");
  sub_train->add_option("--epochs", train.epochs, "phase-1 epochs");
  sub_train->add_option("--batch", train.batch, "batch size (0 = phase default)");
  sub_train->add_option("--lr", train.lr, "learning rate");
  sub_train->add_option("--eval-every", train.eval_every, "steps between evaluations");
  sub_train->add_option("--steps", train.steps, "phase-2 training steps");
  sub_train->add_option("--negatives", train.negatives, "negatives per query (phase 2)");
  sub_train->add_option("--dim", train.dim, "embedding dim for fresh init");
  sub_train->add_option("--buckets", train.buckets, "hash buckets for fresh init");
  sub_train->add_option("--out", train.out, "checkpoint output path");
  sub_train->add_option("--log", train.log_path, "metrics log output path");

  IndexOpts index_opts;
  auto* sub_index = app.add_subcommand("index", "embed a corpus into a dense index");
  sub_index->add_option("--checkpoint", index_opts.checkpoint, "encoder checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  sub_index->add_option("--corpus", index_opts.corpus, "corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  sub_index->add_option("--out", index_opts.out, "index output path");

  SearchOpts search;
  auto* sub_search = app.add_subcommand("search", "run one query against a corpus");
  sub_search->add_option("--mode", search.mode, "bm25 | dense | oracle");
  sub_search->add_option("--corpus", search.corpus, "corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  sub_search->add_option("--checkpoint", search.checkpoint, "dual encoder checkpoint (dense)")
      ->check(CLI::ExistingFile);
  sub_search->add_option("--index", search.index, "dense index file")->check(CLI::ExistingFile);
  sub_search->add_option("--query", search.query, "query text")->required();
  sub_search->add_option("-k,--k", search.k, "result depth");

  EvalOpts eval_opts;
  auto* sub_eval = app.add_subcommand("eval", "evaluate retrievers against judged queries");
  sub_eval->add_option("--corpus", eval_opts.corpus, "corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  sub_eval->add_option("--queries", eval_opts.queries, "judged queries")
      ->required()
      ->check(CLI::ExistingFile);
  sub_eval->add_option("--checkpoint", eval_opts.checkpoint, "dual encoder checkpoint")
      ->check(CLI::ExistingFile);
  sub_eval->add_option("--k", eval_opts.k_values, "k values (ascending)")->delimiter(',');
  sub_eval->add_flag("--no-bm25", eval_opts.no_bm25, "skip the bm25 retriever");
  sub_eval->add_flag("--no-oracle", eval_opts.no_oracle, "skip the oracle retriever");
  sub_eval->add_option("--out-tsv", eval_opts.out_tsv, "write the TSV report here");
  sub_eval->add_option("--out-md", eval_opts.out_md, "write the markdown report here");
  sub_eval->add_option("--out-per-query", eval_opts.out_per_query, "write the per-query dump here");

  ExperimentOpts exp;
  auto* sub_exp = app.add_subcommand("experiment", "run the full reproducible pipeline");
  sub_exp->add_option("--seed", exp.seed, "root seed");
  sub_exp->add_option("--out", exp.out_dir, "output directory");
  sub_exp->add_option("--vocab", exp.vocab_path, "vocab file")->check(CLI::ExistingFile);
  sub_exp->add_option("--per-op", exp.per_op, "triplet samples per operation");
  sub_exp->add_option("--docs", exp.docs, "benchmark documents");
  sub_exp->add_option("--queries-per-template", exp.queries_per_template, "queries per template");
  sub_exp->add_option("--dim", exp.dim, "embedding dim");
  sub_exp->add_option("--buckets", exp.buckets, "hash buckets");
  sub_exp->add_option("--loss-modes", exp.loss_modes, "phase-1 loss modes")->delimiter(',');
  sub_exp->add_option("--epochs", exp.epochs, "phase-1 epochs");
  sub_exp->add_option("--batch1", exp.batch1, "phase-1 batch size");
  sub_exp->add_option("--lr1", exp.lr1, "phase-1 learning rate");
  sub_exp->add_option("--steps2", exp.steps2, "phase-2 steps");
  sub_exp->add_option("--batch2", exp.batch2, "phase-2 batch size");
  sub_exp->add_option("--lr2", exp.lr2, "phase-2 learning rate");
  sub_exp->add_option("--eval-every", exp.eval_every, "steps between evaluations");
  sub_exp->add_option("--k", exp.k_values, "k values (ascending)")->delimiter(',');
  sub_exp->add_flag("--eval-on-all", exp.eval_on_all, "evaluate on all queries, not the held-out split");
  sub_exp->add_flag("--no-untrained", exp.no_untrained, "skip the untrained-init dual encoder");
  sub_exp->add_flag("--no-bm25", exp.no_bm25, "skip bm25");
  sub_exp->add_flag("--no-oracle", exp.no_oracle, "skip the oracle retriever");

  ReportOpts report;
  auto* sub_report = app.add_subcommand("report", "re-render reports from a per-query dump");
  sub_report->add_option("--per-query", report.per_query, "per-query dump")
      ->required()
      ->check(CLI::ExistingFile);
  sub_report->add_option("--format", report.format, "tsv | markdown");
  sub_report->add_option("--out", report.out, "output path (default stdout)");

  int rc = 0;
  sub_gen->callback([&] { rc = run_gen_data(gen_data); });
  sub_bench->callback([&] { rc = run_gen_bench(gen_bench); });
  sub_train->callback([&] { rc = run_train(train); });
  sub_index->callback([&] { rc = run_index(index_opts); });
  sub_search->callback([&] { rc = run_search(search); });
  sub_eval->callback([&] { rc = run_eval(eval_opts); });
  sub_exp->callback([&] { rc = run_experiment_cmd(exp); });
  sub_report->callback([&] { rc = run_report(report); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
