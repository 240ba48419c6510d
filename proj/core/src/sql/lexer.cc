#include "querygen/sql/lexer.h"

#include <cctype>

#include "querygen/catalog.h"
#include "querygen/error.h"

namespace querygen::sql {

namespace {

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$'; }

}  // namespace

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = s.size();
  auto push = [&](TokenKind kind, std::string text, std::size_t pos) {
    Token t;
    t.kind = kind;
    t.lower = kind == TokenKind::kIdentifier ? to_lower(text) : text;
    t.text = std::move(text);
    t.position = pos;
    out.push_back(std::move(t));
  };

  while (i < n) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < n && s[i + 1] == '-') {
      while (i < n && s[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && s[i + 1] == '*') {
      const auto end = s.find("*/", i + 2);
      if (end == std::string_view::npos) throw SyntaxError(i, "unterminated comment");
      i = end + 2;
      continue;
    }
    const std::size_t start = i;
    if (is_ident_start(c)) {
      while (i < n && is_ident_char(static_cast<unsigned char>(s[i]))) ++i;
      push(TokenKind::kIdentifier, std::string(s.substr(start, i - start)), start);
      continue;
    }
    if (std::isdigit(c) || (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i < n && s[i] == '.') {
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      if (i < n && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < n && std::isdigit(static_cast<unsigned char>(s[j]))) {
          i = j;
          while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
      }
      if (i < n && is_ident_start(static_cast<unsigned char>(s[i])))
        throw SyntaxError(i, "malformed number");
      push(TokenKind::kNumber, std::string(s.substr(start, i - start)), start);
      continue;
    }
    if (c == '\'') {
      std::string value;
      ++i;
      for (;;) {
        if (i >= n) throw SyntaxError(start, "unterminated string literal");
        if (s[i] == '\'') {
          if (i + 1 < n && s[i + 1] == '\'') {
            value.push_back('\'');
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        value.push_back(s[i++]);
      }
      push(TokenKind::kString, std::move(value), start);
      continue;
    }
    if (c == '"' || c == '`') {
      const char quote = static_cast<char>(c);
      std::string value;
      ++i;
      for (;;) {
        if (i >= n) throw SyntaxError(start, "unterminated quoted identifier");
        if (s[i] == quote) {
          if (i + 1 < n && s[i + 1] == quote) {
            value.push_back(quote);
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        value.push_back(s[i++]);
      }
      if (value.empty()) throw SyntaxError(start, "empty quoted identifier");
      Token t;
      t.kind = TokenKind::kQuotedIdentifier;
      t.text = value;
      t.lower = to_lower(value);
      t.position = start;
      out.push_back(std::move(t));
      continue;
    }
    static constexpr std::string_view kTwoChar[] = {"<=", ">=", "<>", "!=", "||", "::"};
    bool matched = false;
    for (auto op : kTwoChar) {
      if (s.substr(i, 2) == op) {
        push(TokenKind::kSymbol, std::string(op), start);
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static constexpr std::string_view kOneChar = "(),;.*+-/%=<>";
    if (kOneChar.find(static_cast<char>(c)) != std::string_view::npos) {
      push(TokenKind::kSymbol, std::string(1, static_cast<char>(c)), start);
      ++i;
      continue;
    }
    throw SyntaxError(i, std::string("unexpected character '") + static_cast<char>(c) + "'");
  }
  Token end;
  end.kind = TokenKind::kEnd;
  end.position = n;
  out.push_back(std::move(end));
  return out;
}

}  // namespace querygen::sql
