#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "setret/query.hpp"
#include "setret/rng.hpp"

using namespace setret;

TEST_CASE("single phrase parses as an atom query") {
  const BooleanQuery q = parse_query("french dramas");
  CHECK(q.template_id() == TemplateId::atom);
  REQUIRE(q.terms().size() == 1);
  CHECK(q.terms()[0].text() == "french dramas");
}

TEST_CASE("two-connective and/not form parses") {
  const BooleanQuery q = parse_query("space operas and noir thrillers not war documentaries");
  CHECK(q.template_id() == TemplateId::and_not3);
  REQUIRE(q.terms().size() == 3);
  CHECK(q.terms()[0].text() == "space operas");
  CHECK(q.terms()[1].text() == "noir thrillers");
  CHECK(q.terms()[2].text() == "war documentaries");
}

TEST_CASE("mixed connectives are rejected") {
  CHECK_THROWS_AS(parse_query("a and b or c"), MixedTemplateError);
  CHECK_THROWS_AS(parse_query("a or b and c"), MixedTemplateError);
  CHECK_THROWS_AS(parse_query("a not b not c"), MixedTemplateError);
  CHECK_THROWS_AS(parse_query("a not b or c"), MixedTemplateError);
  CHECK_THROWS_AS(parse_query("a or b or c or d"), MixedTemplateError);
}

TEST_CASE("missing atoms are rejected") {
  CHECK_THROWS_AS(parse_query(""), EmptyAtomError);
  CHECK_THROWS_AS(parse_query("   "), EmptyAtomError);
  CHECK_THROWS_AS(parse_query("and b"), EmptyAtomError);
  CHECK_THROWS_AS(parse_query("a or"), EmptyAtomError);
  CHECK_THROWS_AS(parse_query("a and and b"), EmptyAtomError);
}

TEST_CASE("connectives match case-insensitively as standalone words") {
  const BooleanQuery q = parse_query("Handmade Pottery AND Glass Art");
  CHECK(q.template_id() == TemplateId::and2);
  CHECK(q.terms()[0].text() == "handmade pottery");
  // Words merely containing a connective are part of the atom.
  const BooleanQuery q2 = parse_query("sandy beaches");
  CHECK(q2.template_id() == TemplateId::atom);
  const BooleanQuery q3 = parse_query("films but not war");
  CHECK(q3.template_id() == TemplateId::not2);
  CHECK(q3.terms()[0].text() == "films but");
}

TEST_CASE("rendering is canonical lowercase with single-space connectives") {
  CHECK(render_query(BooleanQuery(TemplateId::or2, {Atom("a1"), Atom("b1")})) == "a1 or b1");
  CHECK(render_query(BooleanQuery(TemplateId::not2, {Atom("a1"), Atom("b1")})) == "a1 not b1");
  CHECK(render_query(BooleanQuery(TemplateId::and3, {Atom("a1"), Atom("b1"), Atom("c1")})) ==
        "a1 and b1 and c1");
}

TEST_CASE("template ids carry their report labels") {
  CHECK(template_label(template_of(BooleanQuery(TemplateId::atom, {Atom("x")}))) == "A");
  CHECK(template_label(TemplateId::and_not3) == "A and B not C");
  CHECK(template_label(TemplateId::or3) == "A or B or C");
  CHECK(template_from_label("A or B") == TemplateId::or2);
  CHECK_THROWS_AS(template_from_label("A xor B"), UnknownConnectiveError);
}

TEST_CASE("atoms reject connective words and empty text") {
  CHECK_THROWS_AS(Atom(""), EmptyAtomError);
  CHECK_THROWS_AS(Atom("  \t "), EmptyAtomError);
  CHECK_THROWS_AS(Atom("war and peace"), ParseError);
  CHECK_THROWS_AS(Atom("to be or"), ParseError);
  CHECK(Atom("  Mixed  CASE  words ").text() == "mixed case words");
}

TEST_CASE("arity must match the template") {
  CHECK_THROWS_AS(BooleanQuery(TemplateId::and2, {Atom("x")}), ParseError);
  CHECK_THROWS_AS(BooleanQuery(TemplateId::atom, {Atom("x"), Atom("y")}), ParseError);
}

TEST_CASE("parse-render round trip over random atoms and all templates") {
  const std::vector<std::string> pool = {"silent films",  "arctic birds", "x",
                                         "deep sea life", "jazz records", "qqq zzz www"};
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    for (const TemplateId tmpl : kAllTemplates) {
      std::vector<Atom> atoms;
      for (int i = 0; i < template_arity(tmpl); ++i) {
        atoms.emplace_back(pool[rng.below(pool.size())]);
      }
      const BooleanQuery q(tmpl, std::move(atoms));
      CHECK(parse_query(render_query(q)) == q);
    }
  }
}
