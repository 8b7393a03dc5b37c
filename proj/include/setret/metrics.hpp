#pragma once

#include <span>
#include <string>
#include <vector>

#include "setret/retrieval.hpp"
#include "setret/types.hpp"

namespace setret {

struct EvalConfig {
  std::vector<int> k_values = {1, 5, 10, 100};

  void validate() const;
  int max_k() const { return k_values.back(); }
};

// |relevant ∩ top-K| / |relevant|. Throws EmptyRelevantSetError.
double recall_at_k(const std::vector<DocId>& relevant, const RankedList& ranked, int k);

// 1 iff all answers are retrieved when |relevant| <= K, or at least K of
// them are when |relevant| > K.
int mrecall_at_k(const std::vector<DocId>& relevant, const RankedList& ranked, int k);

struct PerQueryMetrics {
  int query_id = 0;
  TemplateId template_id = TemplateId::atom;
  std::vector<double> recall;  // aligned with EvalConfig::k_values
  std::vector<int> mrecall;
};

struct RetrieverRun {
  std::string name;
  std::vector<PerQueryMetrics> per_query;
};

struct EvalReport {
  std::vector<int> k_values;
  std::vector<std::string> retrievers;
  std::vector<std::vector<double>> avg_recall;   // [retriever][k]
  std::vector<std::vector<double>> avg_mrecall;  // [retriever][k]
  std::vector<TemplateId> templates_present;     // canonical order
  std::vector<int> template_counts;
  std::vector<std::vector<double>> template_recall;  // [template][retriever], at max k
};

// Unweighted means over queries; per-template rows cover only templates
// that actually occur.
EvalReport aggregate(std::span<const RetrieverRun> runs, const EvalConfig& cfg);

enum class ReportFormat { tsv, markdown };

// Deterministic byte output, three-decimal cells.
std::string emit_report(const EvalReport& report, ReportFormat format);

// Tab-separated per-query detail: retriever, query_id, template, then
// recall@k and mrecall@k columns.
std::string emit_per_query(std::span<const RetrieverRun> runs, const EvalConfig& cfg);

// Convenience: metrics for one query against one ranked list.
PerQueryMetrics evaluate_query(const JudgedQuery& query, const RankedList& ranked,
                               const EvalConfig& cfg);

}  // namespace setret
