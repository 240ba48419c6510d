#include <cctype>
#include <regex>

#include "querygen/llm.h"

namespace querygen {

namespace {

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool word_at(std::string_view text, std::size_t pos, std::string_view word) {
  if (pos + word.size() > text.size()) return false;
  if (pos > 0 && word_char(text[pos - 1])) return false;
  for (std::size_t i = 0; i < word.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(text[pos + i])) != word[i]) return false;
  const std::size_t end = pos + word.size();
  return end == text.size() || !word_char(text[end]);
}

// WITH [RECURSIVE] name [(cols)] AS (
bool cte_at(std::string_view text, std::size_t pos) {
  static const std::regex kCte(R"(^with\s+(recursive\s+)?[A-Za-z_"`][\w"`]*\s*(\([^)]*\)\s*)?as\s*\()",
                               std::regex::icase);
  const std::string tail(text.substr(pos, 400));
  return std::regex_search(tail, kCte);
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool contains_sql(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (word_at(s, i, "select") || word_at(s, i, "with")) return true;
  return false;
}

// End of the statement starting at `start`: just past ';', at a blank line,
// or at the end of the text.
std::size_t statement_end(std::string_view text, std::size_t start) {
  char quote = 0;
  for (std::size_t i = start; i < text.size(); ++i) {
    const char c = text[i];
    if (quote) {
      if (c == quote) quote = 0;
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
      continue;
    }
    if (c == ';') return i + 1;
    if (c == '\n') {
      std::size_t j = i + 1;
      while (j < text.size() && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r')) ++j;
      if (j < text.size() && text[j] == '\n') return i;
      if (j >= text.size()) return i;
    }
  }
  return text.size();
}

}  // namespace

std::vector<std::string> extract_sql(std::string_view completion) {
  std::vector<std::string> out;

  for (std::size_t pos = completion.find("```"); pos != std::string_view::npos;) {
    std::size_t body = completion.find('\n', pos + 3);
    if (body == std::string_view::npos) break;
    const std::size_t close = completion.find("```", body + 1);
    const std::size_t end = close == std::string_view::npos ? completion.size() : close;
    std::string block = trim(completion.substr(body + 1, end - body - 1));
    if (!block.empty() && contains_sql(block)) out.push_back(std::move(block));
    if (close == std::string_view::npos) break;
    pos = completion.find("```", close + 3);
  }
  if (!out.empty()) return out;

  std::size_t i = 0;
  while (i < completion.size()) {
    if (word_at(completion, i, "select") || (word_at(completion, i, "with") && cte_at(completion, i))) {
      const std::size_t end = statement_end(completion, i);
      std::string stmt = trim(completion.substr(i, end - i));
      if (!stmt.empty()) out.push_back(std::move(stmt));
      i = end;
      continue;
    }
    ++i;
  }
  return out;
}

}  // namespace querygen
