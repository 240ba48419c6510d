#include "querygen/jsonl.h"

#include "querygen/error.h"

namespace querygen {

JsonlWriter::JsonlWriter(const std::string& path, std::string_view kind)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
  if (!out_) throw FormatError("cannot write '" + path + "'");
  nlohmann::ordered_json header;
  header["schema_version"] = kJsonlSchemaVersion;
  header["kind"] = std::string(kind);
  out_ << header.dump() << '\n';
}

void JsonlWriter::write(const nlohmann::ordered_json& row) {
  out_ << row.dump() << '\n';
  if (!out_) throw FormatError("write to '" + path_ + "' failed");
}

void write_jsonl(const std::string& path, std::string_view kind,
                 const std::vector<nlohmann::ordered_json>& rows) {
  JsonlWriter w(path, kind);
  for (const auto& r : rows) w.write(r);
}

std::vector<nlohmann::json> read_jsonl(const std::string& path, std::string_view kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::string line;
  std::vector<nlohmann::json> rows;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!header) {
      if (!j.is_object() || j.value("schema_version", 0) != kJsonlSchemaVersion ||
          j.value("kind", std::string{}) != kind)
        throw FormatError(path + ": expected a '" + std::string(kind) +
                          "' header with schema_version " +
                          std::to_string(kJsonlSchemaVersion));
      header = true;
      continue;
    }
    rows.push_back(std::move(j));
  }
  if (!header) throw FormatError(path + ": empty file, missing header");
  return rows;
}

}  // namespace querygen
