#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace querygen::sql {

enum class TokenKind {
  kIdentifier,        // bare word; keywords are identifiers with a known spelling
  kQuotedIdentifier,  // "x" or `x`
  kNumber,
  kString,            // text holds the unescaped contents
  kSymbol,            // operators and punctuation
  kEnd,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;   // original spelling (unescaped for strings)
  std::string lower;  // lower-cased text for identifiers, else == text
  std::size_t position = 0;

  bool is_word(std::string_view word) const {
    return kind == TokenKind::kIdentifier && lower == word;
  }
  bool is_symbol(std::string_view sym) const {
    return kind == TokenKind::kSymbol && text == sym;
  }
};

// Splits SQL text into tokens; comments and whitespace are dropped.
// Throws SyntaxError on an unterminated string/comment or a stray character.
// The returned vector always ends with a kEnd token.
std::vector<Token> tokenize(std::string_view text);

}  // namespace querygen::sql
