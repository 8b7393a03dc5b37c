#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "setret/datagen.hpp"
#include "setret/query.hpp"
#include "setret/retrieval.hpp"
#include "setret/rng.hpp"

using namespace setret;

namespace {

// Scores computed by an independent high-precision script from
// idf(t) = ln(1 + (N - df + 0.5)/(df + 0.5)) and
// w = idf * tf*(k1+1) / (tf + k1*(1 - b + b*dl/avgdl)), k1=1.2, b=0.75.
constexpr double kHandScoreD0 = 0.52755509405133582553;  // "cat cat dog"
constexpr double kHandScoreD1 = 0.56196086105468381415;  // "cat"

Corpus text_corpus(const std::vector<std::string>& texts) {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    Document d;
    d.doc_id = static_cast<DocId>(i);
    d.title = "doc " + std::to_string(i);
    d.text = texts[i];
    d.attributes = {"tag"};
    docs.push_back(std::move(d));
  }
  return Corpus(std::move(docs));
}

// Full-sort reference for the heap-based selection.
RankedList brute_force_topk(const DenseIndex<double>& index, const Vecd& q, int k) {
  std::vector<ScoredDoc> all;
  for (Index row = 0; row < index.doc_embeddings.rows(); ++row) {
    all.push_back({index.doc_ids[static_cast<std::size_t>(row)],
                   index.doc_embeddings.row(row).dot(q.transpose())});
  }
  std::sort(all.begin(), all.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
    return outranks(a, b);
  });
  RankedList list;
  list.k_requested = k;
  const auto take = std::min<std::size_t>(all.size(), static_cast<std::size_t>(k));
  list.entries.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take));
  return list;
}

bool same_ranking(const RankedList& a, const RankedList& b) {
  if (a.entries.size() != b.entries.size()) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (a.entries[i].doc_id != b.entries[i].doc_id) return false;
    if (a.entries[i].score != b.entries[i].score) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("bm25 index statistics on the hand corpus") {
  const Corpus corpus = text_corpus({"cat cat dog", "cat", "bird"});
  const Tokenizer tok;
  const BM25Index index = build_bm25(corpus, tok);
  CHECK(index.n_docs() == 3);
  CHECK(index.doc_length(0) == 3);
  CHECK(index.doc_length(1) == 1);
  CHECK(index.avg_doc_length() == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK(index.postings_for("cat") != nullptr);
  CHECK(index.postings_for("cat")->size() == 2);
  CHECK(index.postings_for("absent") == nullptr);
}

TEST_CASE("bm25 hand-corpus scores match the independent script") {
  const Corpus corpus = text_corpus({"cat cat dog", "cat", "bird"});
  const BM25Index index = build_bm25(corpus, Tokenizer());
  const RankedList result = bm25_search(index, "cat", 10);
  REQUIRE(result.entries.size() == 2);
  // The shorter document wins despite the lower term frequency.
  CHECK(result.entries[0].doc_id == 1);
  CHECK(std::abs(result.entries[0].score - kHandScoreD1) < 1e-9);
  CHECK(result.entries[1].doc_id == 0);
  CHECK(std::abs(result.entries[1].score - kHandScoreD0) < 1e-9);
}

TEST_CASE("bm25 scores only documents containing a query term") {
  const Corpus corpus = text_corpus({"cat cat dog", "cat", "bird"});
  const BM25Index index = build_bm25(corpus, Tokenizer());
  CHECK(bm25_search(index, "unicorn", 5).entries.empty());
  const RankedList dog = bm25_search(index, "dog unicorn", 5);
  REQUIRE(dog.entries.size() == 1);
  CHECK(dog.entries[0].doc_id == 0);
  CHECK(dog.entries[0].score > 0.0);
}

TEST_CASE("bm25 rebuild of the same corpus gives identical results") {
  GenConfig cfg;
  cfg.seed = 5;
  cfg.n_docs = 50;
  cfg.n_queries_per_template = 2;
  cfg.vocab = default_vocab();
  const Benchmark bench = gen_benchmark(cfg);
  const Corpus corpus(bench.docs);
  const BM25Index a = build_bm25(corpus, Tokenizer());
  const BM25Index b = build_bm25(corpus, Tokenizer());
  CHECK(a.avg_doc_length() == b.avg_doc_length());
  for (const auto& q : bench.queries) {
    CHECK(same_ranking(bm25_search(a, q.text, 20), bm25_search(b, q.text, 20)));
  }
}

TEST_CASE("bm25 is monotone in term frequency at fixed document length") {
  Rng rng(71);
  const std::vector<std::string> words = {"ant", "bee", "cow", "dog", "eel",
                                          "fox", "gnu", "hen", "owl", "pig"};
  for (int corpus_id = 0; corpus_id < 100; ++corpus_id) {
    const int n_docs = 3 + rng.below_int(8);
    const int doc_len = 4 + rng.below_int(5);
    std::vector<std::string> texts;
    for (int d = 0; d < n_docs; ++d) {
      std::string text;
      for (int w = 0; w < doc_len; ++w) {
        text += words[rng.below(words.size())] + " ";
      }
      texts.push_back(text);
    }
    const Corpus corpus = text_corpus(texts);
    const BM25Index index = build_bm25(corpus, Tokenizer());
    const std::string& term = words[rng.below(words.size())];
    const auto* posting = index.postings_for(term);
    if (posting == nullptr) continue;

    const RankedList result = bm25_search(index, term, n_docs);
    // All docs share one length, so higher tf must never rank lower.
    std::map<DocId, int> tf;
    for (const auto& [id, count] : *posting) tf[id] = count;
    for (std::size_t i = 0; i + 1 < result.entries.size(); ++i) {
      CHECK(tf[result.entries[i].doc_id] >= tf[result.entries[i + 1].doc_id]);
    }
    CHECK(ranked_list_valid(result));
    for (const auto& e : result.entries) CHECK(e.score > 0.0);
  }
}

TEST_CASE("adding a query-term-free document shifts every idf uniformly") {
  const Corpus base = text_corpus({"cat cat dog", "cat", "bird"});
  const BM25Index before = build_bm25(base, Tokenizer());
  // New document, average length, no query terms.
  const Corpus extended = text_corpus({"cat cat dog", "cat", "bird", "newt newt"});
  const BM25Index after = build_bm25(extended, Tokenizer());

  const RankedList r_before = bm25_search(before, "cat dog", 10);
  const RankedList r_after = bm25_search(after, "cat dog", 10);
  REQUIRE(r_before.entries.size() == r_after.entries.size());
  for (std::size_t i = 0; i < r_before.entries.size(); ++i) {
    CHECK(r_before.entries[i].doc_id == r_after.entries[i].doc_id);
  }
}

TEST_CASE("corpus embedding produces one aligned row per document") {
  GenConfig cfg;
  cfg.seed = 13;
  cfg.n_docs = 25;
  cfg.n_queries_per_template = 1;
  cfg.vocab = default_vocab();
  const Benchmark bench = gen_benchmark(cfg);
  const Corpus corpus(bench.docs);
  const Tokenizer tok(512);
  const auto params = init_params<double>(2, 16, 512);
  const DenseIndex<double> index = embed_corpus(params, corpus, tok);
  CHECK(index.doc_embeddings.rows() == 25);
  CHECK(index.doc_embeddings.cols() == 16);
  CHECK(index.doc_ids.size() == 25);
  CHECK(index.doc_embeddings.array().isFinite().all());

  // Row i is the encoding of document i's text.
  const auto ids = tok.tokenize_document(corpus.doc(3).text);
  const Vecd row3 = encode(params, std::span<const int>(ids));
  CHECK((index.doc_embeddings.row(3).transpose() - row3).norm() == 0.0);

  // Identical text encodes to identical rows.
  const Corpus twins = text_corpus({"same words here", "same words here"});
  const DenseIndex<double> twin_index = embed_corpus(params, twins, tok);
  CHECK((twin_index.doc_embeddings.row(0) - twin_index.doc_embeddings.row(1)).norm() == 0.0);
}

TEST_CASE("dense selection equals the full-sort reference including ties") {
  Rng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + rng.below_int(50);
    const int d = 2 + rng.below_int(6);
    DenseIndex<double> index;
    index.doc_embeddings.resize(n, d);
    for (int i = 0; i < n; ++i) {
      index.doc_ids.push_back(i);
      for (int j = 0; j < d; ++j) {
        // Coarse grid values force plenty of exact score ties.
        index.doc_embeddings(i, j) = static_cast<double>(rng.below_int(3) - 1);
      }
    }
    Vecd q(d);
    for (int j = 0; j < d; ++j) q(j) = static_cast<double>(rng.below_int(3) - 1);
    const int k = 1 + rng.below_int(n + 4);

    const RankedList fast = dense_topk(index, q, k);
    const RankedList brute = brute_force_topk(index, q, k);
    CHECK(same_ranking(fast, brute));
    CHECK(ranked_list_valid(fast));
  }
}

TEST_CASE("dense search with k covering the corpus returns a full ranking") {
  DenseIndex<double> index;
  index.doc_embeddings = Matd::Random(10, 4);
  for (int i = 0; i < 10; ++i) index.doc_ids.push_back(i);
  const Vecd q = Vecd::Random(4);
  CHECK(dense_topk(index, q, 10).entries.size() == 10);
  CHECK(dense_topk(index, q, 50).entries.size() == 10);
  CHECK(dense_topk(index, q, 3).entries.size() == 3);
}

TEST_CASE("a document whose embedding matches the query ranks first") {
  DenseIndex<double> index;
  index.doc_embeddings.resize(4, 2);
  index.doc_embeddings.row(0) << 0.0, 1.0;
  index.doc_embeddings.row(1) << 1.0, 0.0;
  index.doc_embeddings.row(2) << -1.0, 0.0;
  index.doc_embeddings.row(3) << 0.7071, -0.7071;
  for (int i = 0; i < 4; ++i) index.doc_ids.push_back(i);
  Vecd q(2);
  q << 1.0, 0.0;
  const RankedList r = dense_topk(index, q, 4);
  CHECK(r.entries[0].doc_id == 1);
}

TEST_CASE("oracle search lists relevant documents in id order at score one") {
  const Corpus corpus = text_corpus({"x", "x", "x", "x", "x", "x", "x", "x", "x", "x", "x", "x"});
  std::vector<Document> docs = corpus.docs();
  // Tag a scattered subset with the attribute of interest.
  for (const DocId id : {9, 2, 4}) docs[static_cast<std::size_t>(id)].attributes = {"zzz"};
  const Corpus tagged(std::move(docs));

  const RankedList r = oracle_search(parse_query("zzz"), tagged, 10);
  REQUIRE(r.entries.size() == 3);
  CHECK(r.entries[0].doc_id == 2);
  CHECK(r.entries[1].doc_id == 4);
  CHECK(r.entries[2].doc_id == 9);
  for (const auto& e : r.entries) CHECK(e.score == 1.0);

  const RankedList cut = oracle_search(parse_query("zzz"), tagged, 2);
  REQUIRE(cut.entries.size() == 2);
  CHECK(cut.entries[0].doc_id == 2);
  CHECK(cut.entries[1].doc_id == 4);

  CHECK(oracle_search(parse_query("zzz not zzz"), tagged, 5).entries.empty());
  CHECK_THROWS_AS(oracle_search(parse_query("missing attr"), tagged, 5), UnknownAttributeError);
}

TEST_CASE("ranked list validity catches order and duplication breaches") {
  RankedList good{{{1, 2.0}, {0, 1.0}, {2, 1.0}}, 5};
  CHECK(ranked_list_valid(good));
  RankedList bad_order{{{0, 1.0}, {1, 2.0}}, 5};
  CHECK(!ranked_list_valid(bad_order));
  RankedList bad_tie{{{2, 1.0}, {0, 1.0}}, 5};
  CHECK(!ranked_list_valid(bad_tie));
  RankedList dup{{{0, 2.0}, {0, 1.0}}, 5};
  CHECK(!ranked_list_valid(dup));
  RankedList overfull{{{0, 2.0}, {1, 1.0}}, 1};
  CHECK(!ranked_list_valid(overfull));
}
