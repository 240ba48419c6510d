#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "querygen/coverage.h"
#include "querygen/execution.h"
#include "querygen/llm.h"
#include "querygen/mech_generator.h"
#include "querygen/schema.h"
#include "querygen/subschema.h"

namespace querygen {

struct SchemaConfig {
  std::string ddl;       // path to CREATE TABLE text
  std::string data_dir;  // optional .tbl/.csv files for column profiling
  bool infer_foreign_keys = true;
  FkInferenceOptions inference;
  ProfileOptions profile;
};

struct SubschemaConfig {
  std::size_t min_tables = 1;
  std::optional<std::size_t> max_tables;
  std::string provenance = "all";  // all | declared | inferred
  // When non-empty only subschemas whose table list equals one of these
  // comma-joined, sorted lists are kept.
  std::vector<std::string> include;
};

struct MechanicalConfig {
  MechConfig generator;
  // Mechanical queries per subschema and batch. They form the seed-example
  // pool and, with emit set, are part of the generated corpus.
  std::size_t pool_size = 20;
  bool emit = true;
};

struct LlmConfig {
  bool enabled = false;
  std::vector<PromptSetting> settings = canonical_prompt_settings();
  // Prompts per setting and batch; 0 prompts every subschema once.
  std::size_t prompts_per_setting = 0;
  double bias_weight = 0.9;
  GenParams params;
  PromptTexts texts;
  std::string backend = "stub";  // stub | http
  std::string stub_dir;
  std::string model = "stub";
  HttpBackendConfig http;
  int max_attempts = 3;
  int concurrency = 4;
};

struct ValidatorConfig {
  bool require_all_subschema_tables = false;
  bool literal_placeholders = true;
};

struct LoopConfig {
  int limit = 0;
  std::size_t kept_target = 0;  // 0 disables
};

struct SelectionConfig {
  std::string strategy = "stratified";  // stratified | first_n
  std::size_t size = 0;                 // 0 keeps everything
};

struct ExecutionConfig {
  bool enabled = false;
  double timeout_ms = kDefaultTimeoutMs;
  double min_empty_runtime_ms = kDefaultMinEmptyRuntimeMs;
  std::vector<EngineSpec> engines;
};

struct PipelineConfig {
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  SchemaConfig schema;
  SubschemaConfig subschemas;
  MechanicalConfig mechanical;
  LlmConfig llm;
  ValidatorConfig validator;
  CoverageTargets coverage;
  LoopConfig loop;
  SelectionConfig selection;
  ExecutionConfig execution;

  // Throws ConfigError.
  void validate() const;
};

// Parses a TOML file. Relative paths inside it resolve against the file's
// directory. Unknown keys are errors. Throws ConfigError.
PipelineConfig load_config(const std::string& path);
PipelineConfig parse_config(std::string_view toml_text, const std::string& base_dir = ".");

nlohmann::ordered_json to_json(const PipelineConfig& c);

}  // namespace querygen
