#include "setret/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "setret/errors.hpp"
#include "setret/query.hpp"
#include "setret/rng.hpp"

namespace setret {
namespace {

constexpr int kMaxAttempts = 100;   // bounded retry for a whole sample/query
constexpr int kMaxItemDraws = 200;  // bounded retry for one positive/negative

bool contains(const std::string& text, const std::string& phrase) {
  return text.find(phrase) != std::string::npos;
}

std::string fill(std::string form, std::string_view slot, const std::string& value) {
  const auto pos = form.find(slot);
  if (pos != std::string::npos) form.replace(pos, slot.size(), value);
  return form;
}

std::string fill2(const std::string& form, const std::string& x, const std::string& y) {
  return fill(fill(form, "{x}", x), "{y}", y);
}

// Draws an entry index whose synonym group differs from both given groups.
std::size_t draw_other_group(Rng& rng, const Vocab& vocab, int g1, int g2) {
  for (int tries = 0; tries < kMaxItemDraws; ++tries) {
    const std::size_t i = rng.below(vocab.size());
    const int g = vocab.group_of(i);
    if (g != g1 && g != g2) return i;
  }
  throw VocabTooSmallError("cannot find a vocab entry outside the sampled synonym groups");
}

struct PairDraw {
  std::string a, b;
  int group_a, group_b;
};

PairDraw draw_pair(Rng& rng, const Vocab& vocab) {
  for (int tries = 0; tries < kMaxItemDraws; ++tries) {
    const std::size_t ia = rng.below(vocab.size());
    const std::size_t ib = rng.below(vocab.size());
    if (vocab.group_of(ia) == vocab.group_of(ib)) continue;
    const std::string& a = vocab.phrase(ia);
    const std::string& b = vocab.phrase(ib);
    if (contains(a, b) || contains(b, a)) continue;
    return {a, b, vocab.group_of(ia), vocab.group_of(ib)};
  }
  throw VocabTooSmallError("cannot draw a contrastable phrase pair; vocab too small or overlapping");
}

// Positives and negatives of one operation share a single surface-form
// bank: the two sides differ only in which constraint phrases fill the
// slots, never in the surrounding words. Otherwise the encoder could tell
// the sides apart by filler vocabulary alone and learn nothing about the
// constraints themselves.
const std::vector<std::string> kNotGoldForms = {
    "{x} that are not {y}",
    "{x} but not {y}",
};
const std::vector<std::string> kPairForms = {
    "{x} that are {y}",
    "{x} which are also {y}",
    "{x} featuring {y}",
    "{y} and {x}",
};
const std::vector<std::string> kSingleForms = {
    "{x}",
    "just {x}",
    "{x} specifically",
};

class TripletBuilder {
 public:
  TripletBuilder(const GenConfig& cfg, Rng& rng) : cfg_(cfg), rng_(rng) {}

  TripletSample build(SetOp op) {
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      const PairDraw pair = draw_pair(rng_, cfg_.vocab);
      TripletSample sample;
      sample.op = op;
      switch (op) {
        case SetOp::Not:
          sample.anchor = fill2(rng_.pick(kNotGoldForms), pair.a, pair.b);
          break;
        case SetOp::And:
          sample.anchor = fill2("{x} and {y}", pair.a, pair.b);
          break;
        case SetOp::Or:
          sample.anchor = fill2("{x} or {y}", pair.a, pair.b);
          break;
      }
      if (used_anchors_.contains(sample.anchor)) continue;

      sample.positives = make_list(cfg_.positives_per_sample, [&](std::string* out) {
        return make_positive(op, pair, out) && *out != sample.anchor;
      });
      sample.negatives = make_list(cfg_.negatives_per_sample, [&](std::string* out) {
        return make_negative(op, pair, out) && *out != sample.anchor;
      });
      sample.validate();
      used_anchors_.insert(sample.anchor);
      return sample;
    }
    throw VocabTooSmallError("exhausted attempts generating a distinct " +
                             std::string(set_op_label(op)) + " sample");
  }

 private:
  template <typename MakeFn>
  std::vector<std::string> make_list(int count, MakeFn make) {
    std::set<std::string> made;
    for (int tries = 0; tries < kMaxItemDraws && static_cast<int>(made.size()) < count;
         ++tries) {
      std::string text;
      if (make(&text)) made.insert(text);
    }
    if (static_cast<int>(made.size()) < count) {
      throw VocabTooSmallError("cannot generate enough distinct sentences per sample");
    }
    return {made.begin(), made.end()};
  }

  bool make_positive(SetOp op, const PairDraw& pair, std::string* out) {
    switch (op) {
      case SetOp::Not: {
        // "A that are C" with C unrelated to B; must not mention B at all.
        const std::size_t ic = draw_other_group(rng_, cfg_.vocab, pair.group_a, pair.group_b);
        const std::string& c = cfg_.vocab.phrase(ic);
        const std::string text = fill2(rng_.pick(kPairForms), pair.a, c);
        if (contains(text, pair.b)) return false;
        *out = text;
        return true;
      }
      case SetOp::And: {
        // Both constraints present, order or phrasing varied.
        const bool swap = rng_.below(2) == 0;
        *out = fill2(rng_.pick(kPairForms), swap ? pair.b : pair.a, swap ? pair.a : pair.b);
        return true;
      }
      case SetOp::Or: {
        // Exactly one of the two constraints.
        const std::string& x = rng_.below(2) == 0 ? pair.a : pair.b;
        *out = fill(rng_.pick(kSingleForms), "{x}", x);
        return true;
      }
    }
    return false;
  }

  bool make_negative(SetOp op, const PairDraw& pair, std::string* out) {
    switch (op) {
      case SetOp::Not: {
        // Every negative mentions the excluded constraint B.
        *out = fill2(rng_.pick(kPairForms), pair.a, pair.b);
        return true;
      }
      case SetOp::And: {
        // Omit at least one of {A, B}: either a single constraint, or one
        // constraint combined with an unrelated C.
        const bool keep_a = rng_.below(2) == 0;
        const std::string& kept = keep_a ? pair.a : pair.b;
        const std::string& omitted = keep_a ? pair.b : pair.a;
        std::string text;
        if (rng_.below(2) == 0) {
          text = fill(rng_.pick(kSingleForms), "{x}", kept);
        } else {
          const std::size_t ic = draw_other_group(rng_, cfg_.vocab, pair.group_a, pair.group_b);
          const bool swap = rng_.below(2) == 0;
          const std::string& c = cfg_.vocab.phrase(ic);
          text = fill2(rng_.pick(kPairForms), swap ? c : kept, swap ? kept : c);
        }
        if (contains(text, omitted)) return false;
        *out = text;
        return true;
      }
      case SetOp::Or: {
        // Mentions neither A nor B, nor anything from their synonym groups.
        const std::size_t ic = draw_other_group(rng_, cfg_.vocab, pair.group_a, pair.group_b);
        std::string text;
        if (rng_.below(2) == 0) {
          text = fill(rng_.pick(kSingleForms), "{x}", cfg_.vocab.phrase(ic));
        } else {
          const std::size_t id = draw_other_group(rng_, cfg_.vocab, pair.group_a, pair.group_b);
          text = fill2(rng_.pick(kPairForms), cfg_.vocab.phrase(ic), cfg_.vocab.phrase(id));
        }
        if (contains(text, pair.a) || contains(text, pair.b)) return false;
        *out = text;
        return true;
      }
    }
    return false;
  }

  const GenConfig& cfg_;
  Rng& rng_;
  std::set<std::string> used_anchors_;
};

const std::vector<std::string> kDocSentenceForms = {
    "this collection features {x}.",
    "it showcases {x}.",
    "readers will find {x} inside.",
    "the archive highlights {x}.",
    "a section is devoted to {x}.",
};

std::vector<DocId> merge_union(const std::vector<DocId>& a, const std::vector<DocId>& b) {
  std::vector<DocId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<DocId> merge_intersection(const std::vector<DocId>& a, const std::vector<DocId>& b) {
  std::vector<DocId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<DocId> merge_difference(const std::vector<DocId>& a, const std::vector<DocId>& b) {
  std::vector<DocId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

void GenConfig::validate() const {
  if (samples_per_op < 1) throw Error("samples_per_op must be >= 1");
  if (n_docs < 1) throw Error("n_docs must be >= 1");
  if (n_queries_per_template < 0) throw Error("n_queries_per_template must be >= 0");
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) throw Error("split_ratio must be in (0,1)");
  if (positives_per_sample < 2) throw Error("positives_per_sample must be >= 2");
  if (negatives_per_sample < 2) throw Error("negatives_per_sample must be >= 2");
  std::set<std::string> distinct;
  for (const auto& e : vocab.entries()) distinct.insert(e.phrase);
  if (distinct.size() < 20) {
    throw VocabTooSmallError("vocab must contain at least 20 distinct attribute phrases, got " +
                             std::to_string(distinct.size()));
  }
}

TripletDataset gen_triplets(const GenConfig& cfg_in) {
  GenConfig cfg = cfg_in;
  if (cfg.vocab.size() == 0) cfg.vocab = default_vocab();
  cfg.validate();

  Rng rng(derive_seed(cfg.seed, "triplets"));
  TripletBuilder builder(cfg, rng);

  TripletDataset ds;
  ds.provenance = cfg;
  ds.samples.reserve(static_cast<std::size_t>(cfg.samples_per_op) * 3);
  for (const SetOp op : {SetOp::And, SetOp::Or, SetOp::Not}) {
    for (int i = 0; i < cfg.samples_per_op; ++i) {
      ds.samples.push_back(builder.build(op));
    }
  }
  return ds;
}

std::vector<DocId> oracle_answers(const BooleanQuery& q, const Corpus& corpus) {
  const auto& t = q.terms();
  const auto sets = [&](int i) -> const std::vector<DocId>& {
    return corpus.docs_with(t[static_cast<std::size_t>(i)].text());
  };
  switch (q.template_id()) {
    case TemplateId::atom:
      return sets(0);
    case TemplateId::or2:
      return merge_union(sets(0), sets(1));
    case TemplateId::and2:
      return merge_intersection(sets(0), sets(1));
    case TemplateId::not2:
      return merge_difference(sets(0), sets(1));
    case TemplateId::or3:
      return merge_union(merge_union(sets(0), sets(1)), sets(2));
    case TemplateId::and3:
      return merge_intersection(merge_intersection(sets(0), sets(1)), sets(2));
    case TemplateId::and_not3:
      return merge_difference(merge_intersection(sets(0), sets(1)), sets(2));
  }
  throw Error("invalid TemplateId");
}

Benchmark gen_benchmark(const GenConfig& cfg_in) {
  GenConfig cfg = cfg_in;
  if (cfg.vocab.size() == 0) cfg.vocab = default_vocab();
  cfg.validate();

  Rng rng(derive_seed(cfg.seed, "benchmark"));
  Benchmark bench;
  bench.docs.reserve(static_cast<std::size_t>(cfg.n_docs));

  for (int id = 0; id < cfg.n_docs; ++id) {
    const int n_attrs = 2 + rng.below_int(4);  // 2..5 attributes per document
    std::set<std::size_t> chosen;
    while (static_cast<int>(chosen.size()) < n_attrs) {
      chosen.insert(rng.below(cfg.vocab.size()));
    }
    Document doc;
    doc.doc_id = id;
    std::vector<std::size_t> order(chosen.begin(), chosen.end());
    rng.shuffle(order);
    for (const std::size_t idx : order) {
      const std::string& phrase = cfg.vocab.phrase(idx);
      if (!doc.text.empty()) doc.text.push_back(' ');
      doc.text += fill(rng.pick(kDocSentenceForms), "{x}", phrase);
      doc.attributes.push_back(phrase);
    }
    doc.title = "catalog entry " + std::to_string(id) + ": " + doc.attributes.front();
    std::sort(doc.attributes.begin(), doc.attributes.end());
    bench.docs.push_back(std::move(doc));
  }

  const Corpus corpus(bench.docs);
  const std::vector<std::string> carried = corpus.attribute_universe();

  // Pick an attribute carried by at least one document, excluding the given ones.
  const auto draw_carried_excluding = [&](const std::vector<std::string>& exclude) {
    for (int tries = 0; tries < kMaxItemDraws; ++tries) {
      const std::string& attr = carried[rng.below(carried.size())];
      if (std::find(exclude.begin(), exclude.end(), attr) == exclude.end()) return attr;
    }
    throw VocabTooSmallError("cannot draw a distinct carried attribute");
  };

  std::set<std::string> used_texts;
  int next_query_id = 0;
  for (const TemplateId tmpl : kAllTemplates) {
    const int need_attrs = (tmpl == TemplateId::and3) ? 3 : 2;
    for (int i = 0; i < cfg.n_queries_per_template; ++i) {
      bool emitted = false;
      for (int attempt = 0; attempt < kMaxAttempts && !emitted; ++attempt) {
        const Document& seed_doc = bench.docs[rng.below(bench.docs.size())];
        if (static_cast<int>(seed_doc.attributes.size()) < need_attrs) continue;

        // Atoms are drawn so the seed document satisfies the query, which
        // guarantees a non-empty relevant set for every template.
        std::vector<std::size_t> own(seed_doc.attributes.size());
        for (std::size_t k = 0; k < own.size(); ++k) own[k] = k;
        rng.shuffle(own);
        const auto own_attr = [&](int k) { return seed_doc.attributes[own[static_cast<std::size_t>(k)]]; };
        const auto not_in_doc = [&] {
          for (int tries = 0; tries < kMaxItemDraws; ++tries) {
            const std::string& attr = carried[rng.below(carried.size())];
            if (!std::binary_search(seed_doc.attributes.begin(), seed_doc.attributes.end(), attr)) {
              return attr;
            }
          }
          throw VocabTooSmallError("cannot draw an attribute absent from the seed document");
        };

        std::vector<Atom> atoms;
        switch (tmpl) {
          case TemplateId::atom:
            atoms = {Atom(own_attr(0))};
            break;
          case TemplateId::or2:
            atoms = {Atom(own_attr(0)), Atom(draw_carried_excluding({own_attr(0)}))};
            break;
          case TemplateId::and2:
            atoms = {Atom(own_attr(0)), Atom(own_attr(1))};
            break;
          case TemplateId::not2:
            atoms = {Atom(own_attr(0)), Atom(not_in_doc())};
            break;
          case TemplateId::or3: {
            const std::string b = draw_carried_excluding({own_attr(0)});
            const std::string c = draw_carried_excluding({own_attr(0), b});
            atoms = {Atom(own_attr(0)), Atom(b), Atom(c)};
            break;
          }
          case TemplateId::and3:
            atoms = {Atom(own_attr(0)), Atom(own_attr(1)), Atom(own_attr(2))};
            break;
          case TemplateId::and_not3:
            atoms = {Atom(own_attr(0)), Atom(own_attr(1)), Atom(not_in_doc())};
            break;
        }

        BooleanQuery query(tmpl, std::move(atoms));
        std::string text = render_query(query);
        if (used_texts.contains(text)) continue;
        std::vector<DocId> relevant = oracle_answers(query, corpus);
        if (relevant.empty()) continue;

        used_texts.insert(text);
        bench.queries.push_back(
            {next_query_id++, std::move(query), std::move(text), std::move(relevant)});
        emitted = true;
      }
      // After kMaxAttempts failures the slot is skipped.
    }
  }
  return bench;
}

std::pair<TripletDataset, TripletDataset> split_dataset(const TripletDataset& ds, double ratio,
                                                        std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error("split ratio must be in (0,1)");

  TripletDataset train, eval;
  train.provenance = ds.provenance;
  eval.provenance = ds.provenance;

  for (const SetOp op : {SetOp::And, SetOp::Or, SetOp::Not}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
      if (ds.samples[i].op == op) idx.push_back(i);
    }
    Rng rng(derive_seed(seed, "split-" + std::string(set_op_label(op))));
    rng.shuffle(idx);
    const auto n_train =
        static_cast<std::size_t>(std::llround(ratio * static_cast<double>(idx.size())));
    std::vector<std::size_t> train_idx(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> eval_idx(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(eval_idx.begin(), eval_idx.end());
    for (const std::size_t i : train_idx) train.samples.push_back(ds.samples[i]);
    for (const std::size_t i : eval_idx) eval.samples.push_back(ds.samples[i]);
  }
  return {std::move(train), std::move(eval)};
}

std::string dataset_stats(const TripletDataset& ds) {
  std::ostringstream out;
  out << "op\tsamples\tpositives\tnegatives\n";
  for (const SetOp op : {SetOp::And, SetOp::Or, SetOp::Not}) {
    std::size_t n = 0, np = 0, nn = 0;
    for (const auto& s : ds.samples) {
      if (s.op != op) continue;
      ++n;
      np += s.positives.size();
      nn += s.negatives.size();
    }
    out << set_op_label(op) << '\t' << n << '\t' << np << '\t' << nn << '\n';
  }
  out << "total\t" << ds.samples.size() << "\t\t\n";
  return out.str();
}

std::string benchmark_stats(const Benchmark& bench) {
  std::ostringstream out;
  out << "documents\t" << bench.docs.size() << "\n";
  out << "template\tqueries\tmean_relevant\n";
  for (const TemplateId tmpl : kAllTemplates) {
    std::size_t n = 0, rel = 0;
    for (const auto& q : bench.queries) {
      if (q.query.template_id() != tmpl) continue;
      ++n;
      rel += q.relevant.size();
    }
    char mean[32];
    std::snprintf(mean, sizeof(mean), "%.1f",
                  n == 0 ? 0.0 : static_cast<double>(rel) / static_cast<double>(n));
    out << template_label(tmpl) << '\t' << n << '\t' << mean << '\n';
  }
  out << "total queries\t" << bench.queries.size() << "\t\n";
  return out.str();
}

}  // namespace setret
