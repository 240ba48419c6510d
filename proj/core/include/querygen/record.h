#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "querygen/coverage.h"
#include "querygen/execution.h"
#include "querygen/llm.h"
#include "querygen/validate.h"

namespace querygen {

inline constexpr const char* kOriginMechanical = "mechanical";
inline constexpr const char* kOriginLlm = "llm";

// One dataset row.
struct QueryRecord {
  std::string id;  // sql::query_id(sql)
  std::string sql;
  std::string origin;
  std::string subschema_id;

  // Present iff origin == "llm".
  std::optional<PromptSetting> prompt_setting;
  std::optional<std::string> prompt_hash;
  std::optional<std::string> model_name;
  std::optional<GenParams> generation_params;
  std::vector<std::string> example_ids;
  std::optional<ColumnFilter> prompt_columns;

  std::optional<ValidationReport> validation;
  std::optional<ComplexityProfile> profile;
  std::map<std::string, RuntimeLabel> labels;
  int batch = 0;
};

// Builds a record with id derived from sql.
QueryRecord make_record(std::string sql, std::string origin, std::string subschema_id, int batch);

// Throws FormatError when the origin-dependent fields are inconsistent.
void check_record(const QueryRecord& r);

nlohmann::ordered_json to_json(const QueryRecord& r);
QueryRecord record_from_json(const nlohmann::json& j);

void write_records(const std::vector<QueryRecord>& records, const std::string& path);
std::vector<QueryRecord> read_records(const std::string& path);

}  // namespace querygen
