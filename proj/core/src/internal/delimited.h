#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace querygen::internal {

// Splits one line. With `quoted`, double quotes group fields and "" escapes
// a quote (CSV); otherwise the delimiter always splits (TPC-H .tbl).
inline std::vector<std::string> split_fields(const std::string& line, char delim, bool quoted) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted && ch == '"') {
      if (in_quotes && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else {
        in_quotes = !in_quotes;
      }
    } else if (ch == delim && !in_quotes) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

struct TableFile {
  std::ifstream stream;
  bool csv = false;
  std::string path;
};

// Opens <dir>/<table>.tbl, else <dir>/<table>.csv. `stream` is not open
// when neither exists.
inline TableFile open_table_file(const std::string& dir, const std::string& table) {
  TableFile f;
  f.path = dir + "/" + table + ".tbl";
  f.stream.open(f.path, std::ios::binary);
  if (!f.stream) {
    f.stream.clear();
    f.path = dir + "/" + table + ".csv";
    f.stream.open(f.path, std::ios::binary);
    f.csv = true;
  }
  return f;
}

}  // namespace querygen::internal
