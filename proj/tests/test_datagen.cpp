#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "setret/datagen.hpp"
#include "setret/io.hpp"
#include "setret/query.hpp"
#include "setret/rng.hpp"

using namespace setret;

namespace {

GenConfig small_cfg(std::uint64_t seed = 11, int per_op = 40) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.samples_per_op = per_op;
  cfg.vocab = default_vocab();
  return cfg;
}

bool contains(const std::string& text, const std::string& phrase) {
  return text.find(phrase) != std::string::npos;
}

// Recovers the (A, B) phrase pair from a generated anchor sentence.
std::pair<std::string, std::string> anchor_pair(const TripletSample& s) {
  const std::vector<std::string> seps =
      s.op == SetOp::Not
          ? std::vector<std::string>{" that are not ", " but not "}
          : (s.op == SetOp::And ? std::vector<std::string>{" and "}
                                : std::vector<std::string>{" or "});
  for (const auto& sep : seps) {
    const auto pos = s.anchor.find(sep);
    if (pos != std::string::npos) {
      return {s.anchor.substr(0, pos), s.anchor.substr(pos + sep.size())};
    }
  }
  FAIL("anchor has no recognizable connective: ", s.anchor);
  return {};
}

Corpus hand_corpus(const std::vector<std::vector<std::string>>& attribute_sets) {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < attribute_sets.size(); ++i) {
    Document d;
    d.doc_id = static_cast<DocId>(i);
    d.title = "doc " + std::to_string(i);
    d.attributes = attribute_sets[i];
    std::sort(d.attributes.begin(), d.attributes.end());
    for (const auto& a : d.attributes) d.text += a + ". ";
    docs.push_back(std::move(d));
  }
  return Corpus(std::move(docs));
}

// Brute-force per-document predicate, the independent route against which
// the set-algebra oracle is compared.
bool satisfies(const BooleanQuery& q, const Document& doc) {
  const auto has = [&](const Atom& a) {
    return std::binary_search(doc.attributes.begin(), doc.attributes.end(), a.text());
  };
  const auto& t = q.terms();
  switch (q.template_id()) {
    case TemplateId::atom:
      return has(t[0]);
    case TemplateId::or2:
      return has(t[0]) || has(t[1]);
    case TemplateId::and2:
      return has(t[0]) && has(t[1]);
    case TemplateId::not2:
      return has(t[0]) && !has(t[1]);
    case TemplateId::or3:
      return has(t[0]) || has(t[1]) || has(t[2]);
    case TemplateId::and3:
      return has(t[0]) && has(t[1]) && has(t[2]);
    case TemplateId::and_not3:
      return has(t[0]) && has(t[1]) && !has(t[2]);
  }
  return false;
}

}  // namespace

TEST_CASE("triplet generation respects per-op counts and sample shape") {
  const GenConfig cfg = small_cfg();
  const TripletDataset ds = gen_triplets(cfg);
  REQUIRE(ds.samples.size() == 3u * 40u);

  std::set<std::string> anchors;
  int per_op[3] = {0, 0, 0};
  for (const auto& s : ds.samples) {
    s.validate();
    CHECK(s.positives.size() == 2);
    CHECK(s.negatives.size() == 3);
    CHECK(anchors.insert(s.anchor).second);  // no duplicate anchors
    ++per_op[static_cast<int>(s.op)];
  }
  CHECK(per_op[static_cast<int>(SetOp::And)] == 40);
  CHECK(per_op[static_cast<int>(SetOp::Or)] == 40);
  CHECK(per_op[static_cast<int>(SetOp::Not)] == 40);
}

TEST_CASE("NOT samples: negatives carry the excluded phrase, positives never do") {
  const TripletDataset ds = gen_triplets(small_cfg(5, 120));
  for (const auto& s : ds.samples) {
    if (s.op != SetOp::Not) continue;
    const auto [a, b] = anchor_pair(s);
    for (const auto& neg : s.negatives) {
      CHECK_MESSAGE(contains(neg, b), "negative \"", neg, "\" misses \"", b, "\"");
    }
    for (const auto& pos : s.positives) {
      CHECK_MESSAGE(!contains(pos, b), "positive \"", pos, "\" mentions \"", b, "\"");
      CHECK_MESSAGE(contains(pos, a), "positive \"", pos, "\" misses \"", a, "\"");
    }
  }
}

TEST_CASE("AND samples: positives carry both phrases, negatives omit one") {
  const TripletDataset ds = gen_triplets(small_cfg(6, 120));
  for (const auto& s : ds.samples) {
    if (s.op != SetOp::And) continue;
    const auto [a, b] = anchor_pair(s);
    for (const auto& pos : s.positives) {
      CHECK(contains(pos, a));
      CHECK(contains(pos, b));
    }
    for (const auto& neg : s.negatives) {
      const bool omits_one = !contains(neg, a) || !contains(neg, b);
      CHECK_MESSAGE(omits_one, "negative \"", neg, "\" carries both constraints");
    }
  }
}

TEST_CASE("OR samples: positives carry exactly one phrase, negatives neither") {
  const TripletDataset ds = gen_triplets(small_cfg(8, 120));
  for (const auto& s : ds.samples) {
    if (s.op != SetOp::Or) continue;
    const auto [a, b] = anchor_pair(s);
    for (const auto& pos : s.positives) {
      CHECK(contains(pos, a) != contains(pos, b));
    }
    for (const auto& neg : s.negatives) {
      CHECK(!contains(neg, a));
      CHECK(!contains(neg, b));
    }
  }
}

TEST_CASE("generation is byte-deterministic per seed") {
  const TripletDataset a = gen_triplets(small_cfg(42, 30));
  const TripletDataset b = gen_triplets(small_cfg(42, 30));
  std::ostringstream sa, sb;
  write_triplets(sa, a.samples);
  write_triplets(sb, b.samples);
  CHECK(sa.str() == sb.str());

  const TripletDataset c = gen_triplets(small_cfg(43, 30));
  std::ostringstream sc;
  write_triplets(sc, c.samples);
  CHECK(sa.str() != sc.str());
}

TEST_CASE("one-group vocab cannot satisfy the distinct-pair constraint") {
  GenConfig cfg = small_cfg(1, 2);
  std::vector<VocabEntry> entries;
  for (int i = 0; i < 22; ++i) {
    entries.push_back({"phrase number " + std::to_string(i), 0});
  }
  cfg.vocab = Vocab(std::move(entries));
  CHECK_THROWS_AS(gen_triplets(cfg), VocabTooSmallError);
}

TEST_CASE("vocab below 20 distinct phrases is rejected") {
  GenConfig cfg = small_cfg();
  std::vector<VocabEntry> entries;
  for (int i = 0; i < 12; ++i) entries.push_back({"phrase " + std::to_string(i), i});
  cfg.vocab = Vocab(std::move(entries));
  CHECK_THROWS_AS(cfg.validate(), VocabTooSmallError);
}

TEST_CASE("default vocab phrases are valid atoms and substring-free") {
  const Vocab vocab = default_vocab();
  CHECK(vocab.size() >= 20);
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    CHECK(Atom(vocab.phrase(i)).text() == vocab.phrase(i));
    for (std::size_t j = 0; j < vocab.size(); ++j) {
      if (i == j) continue;
      CHECK_MESSAGE(vocab.phrase(j).find(vocab.phrase(i)) == std::string::npos,
                    "\"", vocab.phrase(i), "\" is contained in \"", vocab.phrase(j), "\"");
    }
  }
}

TEST_CASE("oracle set algebra on a hand corpus") {
  const Corpus corpus = hand_corpus({
      {"x"},            // 0
      {"x", "y"},       // 1
      {"y"},            // 2
      {"z"},            // 3
      {"x", "y", "z"},  // 4
  });

  CHECK(oracle_answers(parse_query("x"), corpus) == std::vector<DocId>{0, 1, 4});
  CHECK(oracle_answers(parse_query("x or z"), corpus) == std::vector<DocId>{0, 1, 3, 4});
  CHECK(oracle_answers(parse_query("x and y"), corpus) == std::vector<DocId>{1, 4});
  CHECK(oracle_answers(parse_query("x not y"), corpus) == std::vector<DocId>{0});
  CHECK(oracle_answers(parse_query("x and y not z"), corpus) == std::vector<DocId>{1});
  CHECK(oracle_answers(parse_query("x and y and z"), corpus) == std::vector<DocId>{4});
  CHECK_THROWS_AS(oracle_answers(parse_query("unknown thing"), corpus), UnknownAttributeError);
}

TEST_CASE("union of disjoint sets and intersection with an empty operand") {
  const Corpus corpus = hand_corpus({
      {"a", "c"},  // 0
      {"a"},       // 1
      {"b"},       // 2
      {"c"},       // 3
  });
  CHECK(oracle_answers(parse_query("a or b"), corpus) == std::vector<DocId>{0, 1, 2});
  // "b" and "c" never co-occur, so any 3-way intersection through them is empty.
  CHECK(oracle_answers(parse_query("a and b and c"), corpus).empty());
}

TEST_CASE("benchmark documents and judgments satisfy their contracts") {
  GenConfig cfg = small_cfg(21);
  cfg.n_docs = 120;
  cfg.n_queries_per_template = 6;
  const Benchmark bench = gen_benchmark(cfg);

  REQUIRE(bench.docs.size() == 120);
  for (std::size_t i = 0; i < bench.docs.size(); ++i) {
    CHECK(bench.docs[i].doc_id == static_cast<DocId>(i));
    CHECK(bench.docs[i].attributes.size() >= 2);
    CHECK(bench.docs[i].attributes.size() <= 5);
    for (const auto& attr : bench.docs[i].attributes) {
      CHECK(contains(bench.docs[i].text, attr));
    }
  }

  const Corpus corpus(bench.docs);
  std::set<int> seen_templates;
  std::set<std::string> texts;
  for (const auto& q : bench.queries) {
    CHECK(!q.relevant.empty());
    CHECK(texts.insert(q.text).second);
    seen_templates.insert(static_cast<int>(q.query.template_id()));
    // Judgments equal both the set-algebra oracle and a brute-force scan.
    CHECK(q.relevant == oracle_answers(q.query, corpus));
    std::vector<DocId> brute;
    for (const auto& doc : bench.docs) {
      if (satisfies(q.query, doc)) brute.push_back(doc.doc_id);
    }
    CHECK(q.relevant == brute);
    CHECK(parse_query(q.text) == q.query);
  }
  CHECK(seen_templates.size() == 7);
  CHECK(bench.queries.size() == 7u * 6u);
}

TEST_CASE("oracle answers match brute force on random benchmark queries") {
  GenConfig cfg = small_cfg(33);
  cfg.n_docs = 60;
  const Benchmark bench = gen_benchmark(cfg);
  const Corpus corpus(bench.docs);
  const auto attrs = corpus.attribute_universe();
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const TemplateId tmpl = kAllTemplates[rng.below(7)];
    std::vector<Atom> atoms;
    std::set<std::string> used;
    while (static_cast<int>(atoms.size()) < template_arity(tmpl)) {
      const auto& a = attrs[rng.below(attrs.size())];
      if (used.insert(a).second) atoms.emplace_back(a);
    }
    const BooleanQuery q(tmpl, std::move(atoms));
    std::vector<DocId> brute;
    for (const auto& doc : bench.docs) {
      if (satisfies(q, doc)) brute.push_back(doc.doc_id);
    }
    CHECK(oracle_answers(q, corpus) == brute);
  }
}

TEST_CASE("split is stratified per op, disjoint, exhaustive, deterministic") {
  const TripletDataset ds = gen_triplets(small_cfg(3, 100));
  const auto [train, eval] = split_dataset(ds, 0.8, 77);
  CHECK(train.samples.size() == 240);
  CHECK(eval.samples.size() == 60);

  int train_and = 0;
  for (const auto& s : train.samples) {
    if (s.op == SetOp::And) ++train_and;
  }
  CHECK(train_and == 80);

  std::set<std::string> train_anchors, all_anchors;
  for (const auto& s : train.samples) train_anchors.insert(s.anchor);
  for (const auto& s : eval.samples) {
    CHECK(!train_anchors.contains(s.anchor));
  }
  for (const auto& s : ds.samples) all_anchors.insert(s.anchor);
  std::set<std::string> recombined = train_anchors;
  for (const auto& s : eval.samples) recombined.insert(s.anchor);
  CHECK(recombined == all_anchors);

  const auto [train2, eval2] = split_dataset(ds, 0.8, 77);
  std::ostringstream a, b;
  write_triplets(a, train.samples);
  write_triplets(b, train2.samples);
  CHECK(a.str() == b.str());
}

TEST_CASE("split ratio validation") {
  const TripletDataset ds = gen_triplets(small_cfg(3, 5));
  CHECK_THROWS_AS(split_dataset(ds, 0.0, 1), Error);
  CHECK_THROWS_AS(split_dataset(ds, 1.0, 1), Error);
}
