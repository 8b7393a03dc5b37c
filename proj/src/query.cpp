#include "setret/query.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace setret {
namespace {

enum class Conn { And, Or, Not };

std::string lower_copy(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        words.push_back(cur);
        cur.clear();
      }
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) words.push_back(cur);
  return words;
}

bool is_connective(const std::string& word, Conn* out) {
  if (word == "and") {
    *out = Conn::And;
    return true;
  }
  if (word == "or") {
    *out = Conn::Or;
    return true;
  }
  if (word == "not") {
    *out = Conn::Not;
    return true;
  }
  return false;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

}  // namespace

std::string_view set_op_label(SetOp op) {
  switch (op) {
    case SetOp::And:
      return "AND";
    case SetOp::Or:
      return "OR";
    case SetOp::Not:
      return "NOT";
  }
  throw Error("invalid SetOp");
}

SetOp set_op_from_label(std::string_view label) {
  if (label == "AND") return SetOp::And;
  if (label == "OR") return SetOp::Or;
  if (label == "NOT") return SetOp::Not;
  throw Error("unknown operation label: " + std::string(label));
}

std::string_view template_label(TemplateId id) {
  switch (id) {
    case TemplateId::atom:
      return "A";
    case TemplateId::or2:
      return "A or B";
    case TemplateId::and2:
      return "A and B";
    case TemplateId::not2:
      return "A not B";
    case TemplateId::or3:
      return "A or B or C";
    case TemplateId::and3:
      return "A and B and C";
    case TemplateId::and_not3:
      return "A and B not C";
  }
  throw Error("invalid TemplateId");
}

TemplateId template_from_label(std::string_view label) {
  for (TemplateId id : kAllTemplates) {
    if (template_label(id) == label) return id;
  }
  throw UnknownConnectiveError("unknown query template: " + std::string(label));
}

int template_arity(TemplateId id) {
  switch (id) {
    case TemplateId::atom:
      return 1;
    case TemplateId::or2:
    case TemplateId::and2:
    case TemplateId::not2:
      return 2;
    default:
      return 3;
  }
}

Atom::Atom(std::string_view text) {
  const std::vector<std::string> words = split_words(lower_copy(text));
  if (words.empty()) throw EmptyAtomError("atom text is empty");
  for (const auto& w : words) {
    Conn c;
    if (is_connective(w, &c)) {
      throw ParseError("atom contains reserved connective word: \"" + w + "\"");
    }
  }
  text_ = join(words);
}

BooleanQuery::BooleanQuery(TemplateId id, std::vector<Atom> terms)
    : template_id_(id), terms_(std::move(terms)) {
  const int arity = template_arity(id);
  if (static_cast<int>(terms_.size()) != arity) {
    throw ParseError("template " + std::string(template_label(id)) + " requires " +
                     std::to_string(arity) + " terms, got " + std::to_string(terms_.size()));
  }
}

BooleanQuery parse_query(std::string_view text) {
  const std::vector<std::string> words = split_words(lower_copy(text));
  if (words.empty()) throw EmptyAtomError("query text is empty");

  std::vector<std::vector<std::string>> segments(1);
  std::vector<Conn> connectives;
  for (const auto& w : words) {
    Conn c;
    if (is_connective(w, &c)) {
      connectives.push_back(c);
      segments.emplace_back();
    } else {
      segments.back().push_back(w);
    }
  }

  std::vector<Atom> atoms;
  atoms.reserve(segments.size());
  for (const auto& seg : segments) {
    if (seg.empty()) throw EmptyAtomError("missing constraint text around a connective");
    atoms.emplace_back(join(seg));
  }

  static constexpr std::array<std::pair<std::array<Conn, 2>, TemplateId>, 3> kTwoConn = {{
      {{Conn::Or, Conn::Or}, TemplateId::or3},
      {{Conn::And, Conn::And}, TemplateId::and3},
      {{Conn::And, Conn::Not}, TemplateId::and_not3},
  }};

  switch (connectives.size()) {
    case 0:
      return BooleanQuery(TemplateId::atom, std::move(atoms));
    case 1:
      switch (connectives[0]) {
        case Conn::Or:
          return BooleanQuery(TemplateId::or2, std::move(atoms));
        case Conn::And:
          return BooleanQuery(TemplateId::and2, std::move(atoms));
        case Conn::Not:
          return BooleanQuery(TemplateId::not2, std::move(atoms));
      }
      break;
    case 2:
      for (const auto& [pattern, id] : kTwoConn) {
        if (connectives[0] == pattern[0] && connectives[1] == pattern[1]) {
          return BooleanQuery(id, std::move(atoms));
        }
      }
      break;
    default:
      break;
  }
  throw MixedTemplateError("connective sequence is not one of the seven templates: \"" +
                           std::string(text) + "\"");
}

std::string render_query(const BooleanQuery& q) {
  const auto& t = q.terms();
  switch (q.template_id()) {
    case TemplateId::atom:
      return t[0].text();
    case TemplateId::or2:
      return t[0].text() + " or " + t[1].text();
    case TemplateId::and2:
      return t[0].text() + " and " + t[1].text();
    case TemplateId::not2:
      return t[0].text() + " not " + t[1].text();
    case TemplateId::or3:
      return t[0].text() + " or " + t[1].text() + " or " + t[2].text();
    case TemplateId::and3:
      return t[0].text() + " and " + t[1].text() + " and " + t[2].text();
    case TemplateId::and_not3:
      return t[0].text() + " and " + t[1].text() + " not " + t[2].text();
  }
  throw Error("invalid TemplateId");
}

TemplateId template_of(const BooleanQuery& q) { return q.template_id(); }

void TripletSample::validate() const {
  if (anchor.empty()) throw Error("triplet sample has empty anchor");
  if (positives.empty()) throw Error("triplet sample has no positives");
  if (negatives.empty()) throw Error("triplet sample has no negatives");
  for (const auto& p : positives) {
    if (p == anchor) throw Error("anchor appears among positives");
    for (const auto& n : negatives) {
      if (p == n) throw Error("positives and negatives overlap: \"" + p + "\"");
    }
  }
  for (const auto& n : negatives) {
    if (n == anchor) throw Error("anchor appears among negatives");
  }
}

}  // namespace setret
