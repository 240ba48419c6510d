#pragma once

#include <memory>
#include <string_view>

#include "querygen/sql/ast.h"

namespace querygen::sql {

// Parses exactly one SELECT statement (optionally preceded by WITH and
// followed by a single ';'). Throws SyntaxError with the byte offset of the
// offending token.
std::unique_ptr<Query> parse_query(std::string_view sql);

// True for words that may not be used as bare identifiers or implicit aliases.
bool is_reserved_word(std::string_view lower_word);

}  // namespace querygen::sql
