#include "setret/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "setret/errors.hpp"
#include "setret/query.hpp"

namespace setret {
namespace {

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

int intersection_size(const std::vector<DocId>& relevant, const RankedList& ranked, int k) {
  const auto depth = std::min<std::size_t>(ranked.entries.size(), static_cast<std::size_t>(k));
  int hits = 0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (std::binary_search(relevant.begin(), relevant.end(), ranked.entries[i].doc_id)) {
      ++hits;
    }
  }
  return hits;
}

}  // namespace

void EvalConfig::validate() const {
  if (k_values.empty()) throw Error("k_values must be non-empty");
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] < 1) throw Error("k values must be >= 1");
    if (i > 0 && k_values[i] <= k_values[i - 1]) {
      throw Error("k values must be strictly ascending");
    }
  }
}

double recall_at_k(const std::vector<DocId>& relevant, const RankedList& ranked, int k) {
  if (relevant.empty()) throw EmptyRelevantSetError("recall undefined for an empty relevant set");
  return static_cast<double>(intersection_size(relevant, ranked, k)) /
         static_cast<double>(relevant.size());
}

int mrecall_at_k(const std::vector<DocId>& relevant, const RankedList& ranked, int k) {
  if (relevant.empty()) throw EmptyRelevantSetError("mrecall undefined for an empty relevant set");
  const int hits = intersection_size(relevant, ranked, k);
  if (static_cast<int>(relevant.size()) <= k) {
    return hits == static_cast<int>(relevant.size()) ? 1 : 0;
  }
  return hits >= k ? 1 : 0;
}

PerQueryMetrics evaluate_query(const JudgedQuery& query, const RankedList& ranked,
                               const EvalConfig& cfg) {
  PerQueryMetrics m;
  m.query_id = query.query_id;
  m.template_id = query.query.template_id();
  m.recall.reserve(cfg.k_values.size());
  m.mrecall.reserve(cfg.k_values.size());
  for (const int k : cfg.k_values) {
    m.recall.push_back(recall_at_k(query.relevant, ranked, k));
    m.mrecall.push_back(mrecall_at_k(query.relevant, ranked, k));
  }
  return m;
}

EvalReport aggregate(std::span<const RetrieverRun> runs, const EvalConfig& cfg) {
  cfg.validate();
  if (runs.empty()) throw Error("aggregate: no retriever runs");

  EvalReport report;
  report.k_values = cfg.k_values;
  const std::size_t nk = cfg.k_values.size();

  for (const auto& run : runs) {
    if (run.per_query.empty()) throw Error("aggregate: retriever \"" + run.name + "\" has no queries");
    report.retrievers.push_back(run.name);
    std::vector<double> rec(nk, 0.0), mrec(nk, 0.0);
    for (const auto& q : run.per_query) {
      for (std::size_t i = 0; i < nk; ++i) {
        rec[i] += q.recall[i];
        mrec[i] += q.mrecall[i];
      }
    }
    const auto n = static_cast<double>(run.per_query.size());
    for (std::size_t i = 0; i < nk; ++i) {
      rec[i] /= n;
      mrec[i] /= n;
    }
    report.avg_recall.push_back(std::move(rec));
    report.avg_mrecall.push_back(std::move(mrec));
  }

  // Per-template breakdown at the largest k, over templates with queries.
  for (const TemplateId tmpl : kAllTemplates) {
    int count = 0;
    for (const auto& q : runs[0].per_query) {
      if (q.template_id == tmpl) ++count;
    }
    if (count == 0) continue;
    report.templates_present.push_back(tmpl);
    report.template_counts.push_back(count);
    std::vector<double> row;
    row.reserve(runs.size());
    for (const auto& run : runs) {
      double sum = 0.0;
      int n = 0;
      for (const auto& q : run.per_query) {
        if (q.template_id != tmpl) continue;
        sum += q.recall.back();
        ++n;
      }
      row.push_back(n == 0 ? 0.0 : sum / n);
    }
    report.template_recall.push_back(std::move(row));
  }
  return report;
}

std::string emit_report(const EvalReport& report, ReportFormat format) {
  std::ostringstream out;
  const std::size_t nk = report.k_values.size();
  const int max_k = report.k_values.back();

  if (format == ReportFormat::tsv) {
    out << "retriever";
    for (const int k : report.k_values) out << "\trecall@" << k;
    for (const int k : report.k_values) out << "\tmrecall@" << k;
    out << '\n';
    for (std::size_t r = 0; r < report.retrievers.size(); ++r) {
      out << report.retrievers[r];
      for (std::size_t i = 0; i < nk; ++i) out << '\t' << fmt3(report.avg_recall[r][i]);
      for (std::size_t i = 0; i < nk; ++i) out << '\t' << fmt3(report.avg_mrecall[r][i]);
      out << '\n';
    }
    out << '\n';
    out << "template\tqueries";
    for (const auto& name : report.retrievers) out << '\t' << name << "@" << max_k;
    out << '\n';
    for (std::size_t t = 0; t < report.templates_present.size(); ++t) {
      out << template_label(report.templates_present[t]) << '\t' << report.template_counts[t];
      for (std::size_t r = 0; r < report.retrievers.size(); ++r) {
        out << '\t' << fmt3(report.template_recall[t][r]);
      }
      out << '\n';
    }
    return out.str();
  }

  out << "## Average Recall@k and MRecall@k\n\n";
  out << "| retriever |";
  for (const int k : report.k_values) out << " R@" << k << " |";
  for (const int k : report.k_values) out << " MR@" << k << " |";
  out << '\n';
  out << "|---|";
  for (std::size_t i = 0; i < 2 * nk; ++i) out << "---|";
  out << '\n';
  for (std::size_t r = 0; r < report.retrievers.size(); ++r) {
    out << "| " << report.retrievers[r] << " |";
    for (std::size_t i = 0; i < nk; ++i) out << ' ' << fmt3(report.avg_recall[r][i]) << " |";
    for (std::size_t i = 0; i < nk; ++i) out << ' ' << fmt3(report.avg_mrecall[r][i]) << " |";
    out << '\n';
  }
  out << "\n## Recall@" << max_k << " by query template\n\n";
  out << "| template | queries |";
  for (const auto& name : report.retrievers) out << ' ' << name << " |";
  out << '\n';
  out << "|---|---|";
  for (std::size_t r = 0; r < report.retrievers.size(); ++r) out << "---|";
  out << '\n';
  for (std::size_t t = 0; t < report.templates_present.size(); ++t) {
    out << "| " << template_label(report.templates_present[t]) << " | "
        << report.template_counts[t] << " |";
    for (std::size_t r = 0; r < report.retrievers.size(); ++r) {
      out << ' ' << fmt3(report.template_recall[t][r]) << " |";
    }
    out << '\n';
  }
  return out.str();
}

std::string emit_per_query(std::span<const RetrieverRun> runs, const EvalConfig& cfg) {
  std::ostringstream out;
  out << "retriever\tquery_id\ttemplate";
  for (const int k : cfg.k_values) out << "\trecall@" << k;
  for (const int k : cfg.k_values) out << "\tmrecall@" << k;
  out << '\n';
  for (const auto& run : runs) {
    for (const auto& q : run.per_query) {
      out << run.name << '\t' << q.query_id << '\t' << template_label(q.template_id);
      for (const double r : q.recall) out << '\t' << fmt6(r);
      for (const int m : q.mrecall) out << '\t' << m;
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace setret
