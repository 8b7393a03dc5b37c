#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "setret/metrics.hpp"
#include "setret/query.hpp"
#include "setret/rng.hpp"

using namespace setret;

namespace {

RankedList ranking(std::vector<DocId> ids) {
  RankedList list;
  list.k_requested = static_cast<int>(ids.size());
  double score = static_cast<double>(ids.size());
  for (const DocId id : ids) {
    list.entries.push_back({id, score});
    score -= 1.0;
  }
  return list;
}

// Set-based recomputation, the naive route.
double naive_recall(const std::set<DocId>& relevant, const std::vector<DocId>& ranked, int k) {
  std::set<DocId> top;
  for (int i = 0; i < k && i < static_cast<int>(ranked.size()); ++i) top.insert(ranked[i]);
  int hits = 0;
  for (const DocId id : relevant) {
    if (top.contains(id)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(relevant.size());
}

int naive_mrecall(const std::set<DocId>& relevant, const std::vector<DocId>& ranked, int k) {
  std::set<DocId> top;
  for (int i = 0; i < k && i < static_cast<int>(ranked.size()); ++i) top.insert(ranked[i]);
  int hits = 0;
  for (const DocId id : relevant) {
    if (top.contains(id)) ++hits;
  }
  if (static_cast<int>(relevant.size()) <= k) {
    return hits == static_cast<int>(relevant.size()) ? 1 : 0;
  }
  return hits >= k ? 1 : 0;
}

}  // namespace

TEST_CASE("recall examples") {
  const std::vector<DocId> relevant = {1, 2, 3, 4};
  CHECK(recall_at_k(relevant, ranking({1, 2, 9, 8}), 4) == 0.5);
  CHECK(recall_at_k(relevant, ranking({4, 3, 2, 1, 0}), 5) == 1.0);
  CHECK(recall_at_k(relevant, ranking({}), 5) == 0.0);
  CHECK(recall_at_k(relevant, ranking({1, 2, 3, 4}), 2) == 0.5);
  CHECK_THROWS_AS(recall_at_k({}, ranking({1}), 1), EmptyRelevantSetError);
}

TEST_CASE("mrecall examples") {
  // Few answers: all must be found.
  CHECK(mrecall_at_k({3, 7}, ranking({3, 7, 1, 2, 4}), 5) == 1);
  CHECK(mrecall_at_k({3, 7, 9}, ranking({3, 7, 1, 2, 4}), 5) == 0);
  // Many answers: at least k must be found.
  const std::vector<DocId> eight = {0, 1, 2, 3, 4, 5, 6, 7};
  CHECK(mrecall_at_k(eight, ranking({0, 1, 2, 3, 4}), 5) == 1);
  CHECK(mrecall_at_k(eight, ranking({0, 1, 2, 3, 9}), 5) == 0);
  CHECK_THROWS_AS(mrecall_at_k({}, ranking({1}), 1), EmptyRelevantSetError);
}

TEST_CASE("metrics equal the naive set recomputation on random instances") {
  Rng rng(314);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n_docs = 1 + rng.below_int(8);
    std::vector<DocId> perm;
    for (int i = 0; i < n_docs; ++i) perm.push_back(i);
    rng.shuffle(perm);
    const int depth = 1 + rng.below_int(n_docs);
    perm.resize(depth);

    std::set<DocId> rel_set;
    const int n_rel = 1 + rng.below_int(std::min(4, n_docs));
    while (static_cast<int>(rel_set.size()) < n_rel) {
      rel_set.insert(rng.below_int(n_docs));
    }
    const std::vector<DocId> relevant(rel_set.begin(), rel_set.end());
    const int k = 1 + rng.below_int(8);

    const RankedList list = ranking(perm);
    CHECK(recall_at_k(relevant, list, k) == naive_recall(rel_set, perm, k));
    CHECK(mrecall_at_k(relevant, list, k) == naive_mrecall(rel_set, perm, k));

    // Recall@k never decreases as the cutoff grows.
    double prev = 0.0;
    for (int kk = 1; kk <= 8; ++kk) {
      const double r = recall_at_k(relevant, list, kk);
      CHECK(r >= prev);
      prev = r;
    }
  }
}

TEST_CASE("aggregate averages per retriever and splits rows per template") {
  EvalConfig cfg;
  cfg.k_values = {1, 2};

  RetrieverRun run;
  run.name = "toy";
  run.per_query.push_back({0, TemplateId::atom, {0.0, 0.0}, {0, 0}});
  run.per_query.push_back({1, TemplateId::atom, {1.0, 1.0}, {1, 1}});
  run.per_query.push_back({2, TemplateId::or2, {1.0, 0.5}, {0, 1}});
  const std::vector<RetrieverRun> runs = {run};

  const EvalReport report = aggregate(runs, cfg);
  REQUIRE(report.retrievers.size() == 1);
  CHECK(report.avg_recall[0][0] == doctest::Approx(2.0 / 3.0));
  CHECK(report.avg_recall[0][1] == doctest::Approx(0.5));
  CHECK(report.avg_mrecall[0][0] == doctest::Approx(1.0 / 3.0));
  for (const auto& per_k : report.avg_mrecall) {
    for (const double v : per_k) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }

  // Only the two templates with queries are present, in canonical order.
  REQUIRE(report.templates_present.size() == 2);
  CHECK(report.templates_present[0] == TemplateId::atom);
  CHECK(report.templates_present[1] == TemplateId::or2);
  CHECK(report.template_counts[0] == 2);
  CHECK(report.template_counts[1] == 1);
  CHECK(report.template_recall[0][0] == doctest::Approx(0.5));  // recall at max k
  CHECK(report.template_recall[1][0] == doctest::Approx(0.5));
}

TEST_CASE("two queries at recall zero and one average to one half") {
  EvalConfig cfg;
  cfg.k_values = {1};
  RetrieverRun run;
  run.name = "toy";
  run.per_query.push_back({0, TemplateId::atom, {0.0}, {0}});
  run.per_query.push_back({1, TemplateId::atom, {1.0}, {1}});
  const EvalReport report = aggregate(std::vector<RetrieverRun>{run}, cfg);
  CHECK(report.avg_recall[0][0] == 0.5);
}

TEST_CASE("report emission is deterministic and three-decimal") {
  EvalConfig cfg;
  cfg.k_values = {1, 5};
  RetrieverRun a{"alpha", {{0, TemplateId::atom, {0.5, 1.0}, {0, 1}}}};
  RetrieverRun b{"beta", {{0, TemplateId::atom, {0.25, 0.75}, {0, 1}}}};
  const std::vector<RetrieverRun> runs = {a, b};
  const EvalReport report = aggregate(runs, cfg);

  const std::string tsv1 = emit_report(report, ReportFormat::tsv);
  const std::string tsv2 = emit_report(report, ReportFormat::tsv);
  CHECK(tsv1 == tsv2);
  CHECK(tsv1.find("0.500") != std::string::npos);
  CHECK(tsv1.find("0.250") != std::string::npos);

  const std::string md = emit_report(report, ReportFormat::markdown);
  CHECK(md == emit_report(report, ReportFormat::markdown));
  // One row per retriever in the averages table.
  CHECK(md.find("| alpha |") != std::string::npos);
  CHECK(md.find("| beta |") != std::string::npos);

  const std::string dump = emit_per_query(runs, cfg);
  CHECK(dump.find("retriever\tquery_id\ttemplate\trecall@1\trecall@5\tmrecall@1\tmrecall@5") == 0);
  CHECK(dump.find("alpha\t0\tA\t0.500000\t1.000000\t0\t1") != std::string::npos);
}

TEST_CASE("eval config validation") {
  EvalConfig bad;
  bad.k_values = {5, 1};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad.k_values = {};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad.k_values = {0, 2};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad.k_values = {1, 1};
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("evaluate_query computes rows aligned with k values") {
  JudgedQuery q{7, parse_query("a1 and b1"), "a1 and b1", {2, 4}};
  EvalConfig cfg;
  cfg.k_values = {1, 3};
  const PerQueryMetrics m = evaluate_query(q, ranking({2, 9, 4}), cfg);
  CHECK(m.query_id == 7);
  CHECK(m.template_id == TemplateId::and2);
  CHECK(m.recall == std::vector<double>{0.5, 1.0});
  // A single relevant hit at depth one already satisfies the many-answers
  // branch; both answers inside the top three satisfies the few-answers one.
  CHECK(m.mrecall == std::vector<int>{1, 1});
}
