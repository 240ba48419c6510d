#pragma once

#include <string>
#include <string_view>

namespace querygen::sql {

// Canonical text form of a statement: tokens re-joined by single spaces,
// keywords and identifiers lower-cased, "!=" spelled "<>", comments and a
// trailing ';' dropped. With `literal_placeholders`, numeric literals become
// "?num" and string literals "?str". Text that does not tokenize falls back
// to lower-case with collapsed whitespace.
std::string normalize_sql(std::string_view sql, bool literal_placeholders);

// Stable record id: hex FNV-1a of normalize_sql(sql, false).
std::string query_id(std::string_view sql);

}  // namespace querygen::sql
