#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "querygen/catalog.h"
#include "querygen/mech_generator.h"
#include "querygen/schema.h"
#include "querygen/subschema.h"

namespace querygen {

enum class ClauseBias { kNone, kOrderBy, kGroupBy };

std::string_view to_string(ClauseBias bias);
ClauseBias clause_bias_from_string(std::string_view name);  // throws ConfigError

struct PromptSetting {
  int shots = 0;
  ClauseBias bias = ClauseBias::kNone;

  // "<shots>shot-<bias>", e.g. "3shot-group_by".
  std::string label() const;
  static PromptSetting from_label(std::string_view label);  // throws ConfigError

  friend bool operator==(const PromptSetting&, const PromptSetting&) = default;
};

// {0,3} x {none, order_by, group_by}
std::vector<PromptSetting> canonical_prompt_settings();

nlohmann::ordered_json to_json(const PromptSetting& s);
PromptSetting prompt_setting_from_json(const nlohmann::json& j);

struct GenParams {
  double temperature = 0.8;
  double top_p = 0.95;
  double repetition_penalty = 1.05;
  int n_completions = 5;
  int max_tokens = 512;

  void validate() const;  // throws ConfigError
  friend bool operator==(const GenParams&, const GenParams&) = default;
};

nlohmann::ordered_json to_json(const GenParams& p);
GenParams gen_params_from_json(const nlohmann::json& j);

struct PromptTexts {
  std::string group_by_constraint =
      "Whenever possible, please use a group by clause. Use operators for more complex groups.";
  std::string order_by_constraint = "Whenever possible, please use an order by clause.";
};

struct PromptSpec {
  std::vector<std::string> create_statements;
  std::vector<std::string> table_names;
  std::optional<std::string> constraint_text;
  std::vector<SeedExample> seed_examples;
  GenParams generation_params;
};

// Throws ArityError when examples.size() != setting.shots.
PromptSpec make_prompt_spec(const Subschema& subschema, const SchemaCatalog& catalog,
                            const PromptSetting& setting, const std::vector<SeedExample>& examples,
                            const GenParams& params = {}, const PromptTexts& texts = {},
                            const std::optional<ColumnFilter>& column_filter = std::nullopt);

std::string render_prompt(const PromptSpec& spec);

std::string build_prompt(const Subschema& subschema, const SchemaCatalog& catalog,
                         const PromptSetting& setting, const std::vector<SeedExample>& examples,
                         const PromptTexts& texts = {},
                         const std::optional<ColumnFilter>& column_filter = std::nullopt);

struct GenerationResult {
  std::vector<std::string> completions;
  std::vector<std::string> failures;  // one message per missing completion
};

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  // Throws BackendError when no completion could be produced.
  virtual GenerationResult generate(const std::string& prompt, const GenParams& params) = 0;
  virtual std::string model_name() const = 0;
};

// Replays canned completions from a directory. For a prompt whose hash is H
// the file "<H>.json" is used if present, else "default.json". A file holds
// either a JSON array of strings or {"completions": [...]}. Completions from
// default.json are served starting at offset fnv(prompt) mod size, cycling.
class StubBackend : public LlmBackend {
 public:
  explicit StubBackend(std::string directory, std::string model = "stub");
  GenerationResult generate(const std::string& prompt, const GenParams& params) override;
  std::string model_name() const override { return model_; }

 private:
  const std::vector<std::string>* load(const std::string& file);

  std::string directory_;
  std::string model_;
  std::mutex mutex_;
  std::map<std::string, std::optional<std::vector<std::string>>> cache_;
};

struct HttpBackendConfig {
  std::string url;                 // e.g. http://localhost:8000/v1/completions
  std::string model;
  std::string api_key_env = "QUERYGEN_API_KEY";
  std::string style = "completions";  // or "chat"
  int timeout_ms = 60'000;
};

// POSTs {"model", "prompt" | "messages", "temperature", "top_p",
// "repetition_penalty", "n", "max_tokens"} and reads choices[].text or
// choices[].message.content. The bearer token comes from api_key_env.
class HttpBackend : public LlmBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config);
  GenerationResult generate(const std::string& prompt, const GenParams& params) override;
  std::string model_name() const override { return config_.model; }

 private:
  HttpBackendConfig config_;
};

// Validates params, calls the backend once, and caps the result at
// n_completions.
GenerationResult generate_llm(const std::string& prompt, LlmBackend& backend,
                              const GenParams& params);

// Candidate statements in a completion. Fenced code blocks win; otherwise
// the text from the first SELECT (or WITH <name> AS) up to ';' inclusive,
// a blank line or the end.
std::vector<std::string> extract_sql(std::string_view completion);

}  // namespace querygen
