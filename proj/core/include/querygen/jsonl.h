#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace querygen {

inline constexpr int kJsonlSchemaVersion = 1;

// JSON Lines files start with a header line
//   {"schema_version":1,"kind":"<kind>"}
// followed by one compact JSON value per line.
class JsonlWriter {
 public:
  JsonlWriter(const std::string& path, std::string_view kind);
  void write(const nlohmann::ordered_json& row);
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
  std::string path_;
};

void write_jsonl(const std::string& path, std::string_view kind,
                 const std::vector<nlohmann::ordered_json>& rows);

// Throws FormatError on a missing/mismatched header or malformed line.
std::vector<nlohmann::json> read_jsonl(const std::string& path, std::string_view kind);

}  // namespace querygen
