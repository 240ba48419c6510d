#include "querygen/sql/normalize.h"

#include <cctype>

#include "querygen/catalog.h"
#include "querygen/error.h"
#include "querygen/hash.h"
#include "querygen/sql/lexer.h"

namespace querygen::sql {

namespace {

// Lower-cases, drops comments outside string literals and collapses runs of
// whitespace. Used only for text the lexer rejects.
std::string collapse_whitespace(std::string_view sql) {
  std::string out;
  bool pending_space = false;
  bool in_string = false;
  for (std::size_t i = 0; i < sql.size(); ++i) {
    const unsigned char c = sql[i];
    if (c == '\'') in_string = !in_string;
    if (!in_string && sql.compare(i, 2, "--") == 0) {
      i = sql.find('\n', i);
      if (i == std::string_view::npos) break;
      pending_space = !out.empty();
      continue;
    }
    if (!in_string && sql.compare(i, 2, "/*") == 0) {
      i = sql.find("*/", i + 2);
      if (i == std::string_view::npos) break;
      ++i;
      pending_space = !out.empty();
      continue;
    }
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  while (!out.empty() && (out.back() == ';' || out.back() == ' ')) out.pop_back();
  return out;
}

std::string quote(const std::string& value, char q) {
  std::string out(1, q);
  for (char c : value) {
    out.push_back(c);
    if (c == q) out.push_back(q);
  }
  out.push_back(q);
  return out;
}

std::string join_tokens(std::vector<Token> tokens, bool literal_placeholders) {
  while (tokens.size() >= 2 && tokens[tokens.size() - 2].is_symbol(";"))
    tokens.erase(tokens.end() - 2);

  std::string out;
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::kEnd) break;
    if (!out.empty()) out.push_back(' ');
    switch (t.kind) {
      case TokenKind::kIdentifier:
        out += t.lower;
        break;
      case TokenKind::kQuotedIdentifier:
        out += quote(t.lower, '"');
        break;
      case TokenKind::kNumber:
        out += literal_placeholders ? std::string("?num") : t.text;
        break;
      case TokenKind::kString:
        out += literal_placeholders ? std::string("?str") : quote(t.text, '\'');
        break;
      case TokenKind::kSymbol:
        out += t.text == "!=" ? std::string("<>") : t.text;
        break;
      case TokenKind::kEnd:
        break;
    }
  }
  return out;
}

}  // namespace

std::string normalize_sql(std::string_view sql, bool literal_placeholders) {
  try {
    return join_tokens(tokenize(sql), literal_placeholders);
  } catch (const SyntaxError&) {
  }
  // Comments can hide the offending text; retry without them so that the
  // result is itself a fixpoint.
  const std::string collapsed = collapse_whitespace(sql);
  try {
    return join_tokens(tokenize(collapsed), literal_placeholders);
  } catch (const SyntaxError&) {
    return collapsed;
  }
}

std::string query_id(std::string_view sql) {
  return stable_hash(normalize_sql(sql, false));
}

}  // namespace querygen::sql
