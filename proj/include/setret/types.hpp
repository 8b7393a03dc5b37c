#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "setret/errors.hpp"

namespace setret {

using DocId = int;

// The three set operations a training sample can exercise.
enum class SetOp { And, Or, Not };

std::string_view set_op_label(SetOp op);
SetOp set_op_from_label(std::string_view label);

// The seven representable query templates, in canonical report order.
enum class TemplateId { atom, or2, and2, not2, or3, and3, and_not3 };

inline constexpr TemplateId kAllTemplates[] = {
    TemplateId::atom, TemplateId::or2,  TemplateId::and2,     TemplateId::not2,
    TemplateId::or3,  TemplateId::and3, TemplateId::and_not3,
};

std::string_view template_label(TemplateId id);
TemplateId template_from_label(std::string_view label);  // throws UnknownConnectiveError
int template_arity(TemplateId id);

// A single constraint phrase. Construction normalizes the text (lowercase,
// collapsed whitespace) and rejects phrases that would collide with the
// query grammar's connective words.
class Atom {
 public:
  explicit Atom(std::string_view text);

  const std::string& text() const { return text_; }

  friend bool operator==(const Atom&, const Atom&) = default;

 private:
  std::string text_;
};

// Parsed query: a template plus its ordered constraint atoms.
class BooleanQuery {
 public:
  BooleanQuery(TemplateId id, std::vector<Atom> terms);

  TemplateId template_id() const { return template_id_; }
  const std::vector<Atom>& terms() const { return terms_; }

  friend bool operator==(const BooleanQuery&, const BooleanQuery&) = default;

 private:
  TemplateId template_id_;
  std::vector<Atom> terms_;
};

// One generated training sample: an anchor sentence contrasted against
// lists of positive and negative sentences.
struct TripletSample {
  SetOp op = SetOp::And;
  std::string anchor;
  std::vector<std::string> positives;
  std::vector<std::string> negatives;

  // Enforces non-empty lists, positive/negative disjointness, and that the
  // anchor appears in neither list.
  void validate() const;
};

struct Document {
  DocId doc_id = 0;
  std::string title;
  std::string text;
  std::vector<std::string> attributes;  // sorted, unique
};

struct JudgedQuery {
  int query_id = 0;
  BooleanQuery query;
  std::string text;
  std::vector<DocId> relevant;  // sorted, unique, non-empty by construction
};

}  // namespace setret
