#pragma once

#include <string>
#include <string_view>

#include "setret/types.hpp"

namespace setret {

// Parses canonical connective syntax into one of the seven query templates.
// Connectives ("and", "or", "not") are matched case-insensitively as
// standalone whitespace-delimited words; "not" binds the final term only.
// Throws MixedTemplateError for connective sequences outside the seven
// templates and EmptyAtomError for missing constraint text.
BooleanQuery parse_query(std::string_view text);

// Canonical lowercase rendering with single-space connectives.
// parse_query(render_query(q)) == q for every valid query.
std::string render_query(const BooleanQuery& q);

TemplateId template_of(const BooleanQuery& q);

}  // namespace setret
