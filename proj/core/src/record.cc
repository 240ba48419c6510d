#include "querygen/record.h"

#include "querygen/error.h"
#include "querygen/jsonl.h"
#include "querygen/sql/normalize.h"

namespace querygen {

QueryRecord make_record(std::string sql, std::string origin, std::string subschema_id, int batch) {
  QueryRecord r;
  r.id = sql::query_id(sql);
  r.sql = std::move(sql);
  r.origin = std::move(origin);
  r.subschema_id = std::move(subschema_id);
  r.batch = batch;
  return r;
}

void check_record(const QueryRecord& r) {
  if (r.origin == kOriginLlm) {
    if (!r.prompt_setting || !r.prompt_hash || !r.model_name)
      throw FormatError("llm record " + r.id + " lacks prompt metadata");
  } else if (r.origin == kOriginMechanical) {
    if (r.prompt_setting || r.prompt_hash || r.model_name)
      throw FormatError("mechanical record " + r.id + " carries prompt metadata");
  } else {
    throw FormatError("record " + r.id + " has unknown origin '" + r.origin + "'");
  }
}

nlohmann::ordered_json to_json(const QueryRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["sql"] = r.sql;
  j["origin"] = r.origin;
  j["subschema_id"] = r.subschema_id;
  j["batch"] = r.batch;
  if (r.origin == kOriginLlm) {
    j["prompt_setting"] = r.prompt_setting ? to_json(*r.prompt_setting) : nlohmann::ordered_json(nullptr);
    j["prompt_hash"] = r.prompt_hash ? nlohmann::ordered_json(*r.prompt_hash) : nlohmann::ordered_json(nullptr);
    j["model_name"] = r.model_name ? nlohmann::ordered_json(*r.model_name) : nlohmann::ordered_json(nullptr);
    j["generation_params"] = r.generation_params ? to_json(*r.generation_params) : nlohmann::ordered_json(nullptr);
    j["example_ids"] = r.example_ids;
    if (r.prompt_columns) {
      nlohmann::ordered_json cols = nlohmann::ordered_json::object();
      for (const auto& [t, c] : *r.prompt_columns) cols[t] = c;
      j["prompt_columns"] = std::move(cols);
    }
  }
  j["validation"] = r.validation ? to_json(*r.validation) : nlohmann::ordered_json(nullptr);
  j["profile"] = r.profile ? to_json(*r.profile) : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json labels = nlohmann::ordered_json::object();
  for (const auto& [engine, l] : r.labels) {
    nlohmann::ordered_json jl;
    jl["runtime_ms"] = l.runtime_ms;
    jl["row_count"] = l.row_count ? nlohmann::ordered_json(*l.row_count) : nlohmann::ordered_json(nullptr);
    jl["timed_out"] = l.timed_out;
    jl["error"] = l.error ? nlohmann::ordered_json(*l.error) : nlohmann::ordered_json(nullptr);
    labels[engine] = std::move(jl);
  }
  j["labels"] = std::move(labels);
  return j;
}

QueryRecord record_from_json(const nlohmann::json& j) {
  try {
    QueryRecord r;
    r.id = j.at("id").get<std::string>();
    r.sql = j.at("sql").get<std::string>();
    r.origin = j.at("origin").get<std::string>();
    r.subschema_id = j.value("subschema_id", std::string{});
    r.batch = j.value("batch", 0);
    auto present = [&](const char* key) { return j.contains(key) && !j.at(key).is_null(); };
    if (present("prompt_setting")) r.prompt_setting = prompt_setting_from_json(j.at("prompt_setting"));
    if (present("prompt_hash")) r.prompt_hash = j.at("prompt_hash").get<std::string>();
    if (present("model_name")) r.model_name = j.at("model_name").get<std::string>();
    if (present("generation_params")) r.generation_params = gen_params_from_json(j.at("generation_params"));
    if (present("example_ids")) r.example_ids = j.at("example_ids").get<std::vector<std::string>>();
    if (present("prompt_columns")) {
      ColumnFilter f;
      for (auto it = j.at("prompt_columns").begin(); it != j.at("prompt_columns").end(); ++it)
        f[it.key()] = it.value().get<std::set<std::string>>();
      r.prompt_columns = std::move(f);
    }
    if (present("validation")) r.validation = validation_report_from_json(j.at("validation"));
    if (present("profile")) r.profile = complexity_profile_from_json(j.at("profile"));
    if (present("labels")) {
      for (auto it = j.at("labels").begin(); it != j.at("labels").end(); ++it) {
        nlohmann::json jl = it.value();
        jl["query_id"] = r.id;
        jl["engine_id"] = it.key();
        r.labels[it.key()] = runtime_label_from_json(jl);
      }
    }
    check_record(r);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed query record: ") + e.what());
  }
}

void write_records(const std::vector<QueryRecord>& records, const std::string& path) {
  JsonlWriter w(path, "query_records");
  for (const auto& r : records) w.write(to_json(r));
}

std::vector<QueryRecord> read_records(const std::string& path) {
  std::vector<QueryRecord> out;
  for (const auto& j : read_jsonl(path, "query_records")) out.push_back(record_from_json(j));
  return out;
}

}  // namespace querygen
