#include <set>

#include "querygen/error.h"
#include "querygen/llm.h"

namespace querygen {

std::string_view to_string(ClauseBias bias) {
  switch (bias) {
    case ClauseBias::kNone: return "none";
    case ClauseBias::kOrderBy: return "order_by";
    case ClauseBias::kGroupBy: return "group_by";
  }
  return "none";
}

ClauseBias clause_bias_from_string(std::string_view name) {
  if (name == "none") return ClauseBias::kNone;
  if (name == "order_by") return ClauseBias::kOrderBy;
  if (name == "group_by") return ClauseBias::kGroupBy;
  throw ConfigError("unknown bias '" + std::string(name) + "' (none, order_by, group_by)");
}

std::string PromptSetting::label() const {
  return std::to_string(shots) + "shot-" + std::string(to_string(bias));
}

PromptSetting PromptSetting::from_label(std::string_view label) {
  const auto pos = label.find("shot-");
  if (pos == std::string_view::npos || pos == 0)
    throw ConfigError("prompt setting '" + std::string(label) + "' is not <shots>shot-<bias>");
  PromptSetting s;
  try {
    s.shots = std::stoi(std::string(label.substr(0, pos)));
  } catch (const std::exception&) {
    throw ConfigError("prompt setting '" + std::string(label) + "' has a bad shot count");
  }
  if (s.shots < 0) throw ConfigError("shot count must be non-negative");
  s.bias = clause_bias_from_string(label.substr(pos + 5));
  return s;
}

std::vector<PromptSetting> canonical_prompt_settings() {
  std::vector<PromptSetting> out;
  for (int shots : {0, 3})
    for (auto bias : {ClauseBias::kNone, ClauseBias::kOrderBy, ClauseBias::kGroupBy})
      out.push_back({shots, bias});
  return out;
}

nlohmann::ordered_json to_json(const PromptSetting& s) {
  return {{"shots", s.shots}, {"bias", std::string(to_string(s.bias))}};
}

PromptSetting prompt_setting_from_json(const nlohmann::json& j) {
  PromptSetting s;
  s.shots = j.at("shots").get<int>();
  s.bias = clause_bias_from_string(j.at("bias").get<std::string>());
  return s;
}

void GenParams::validate() const {
  if (!(temperature >= 0)) throw ConfigError("temperature must be non-negative");
  if (!(top_p > 0 && top_p <= 1)) throw ConfigError("top_p must be in (0,1]");
  if (!(repetition_penalty >= 1)) throw ConfigError("repetition_penalty must be at least 1");
  if (n_completions < 1) throw ConfigError("n_completions must be at least 1");
  if (max_tokens < 1) throw ConfigError("max_tokens must be at least 1");
}

nlohmann::ordered_json to_json(const GenParams& p) {
  nlohmann::ordered_json j;
  j["temperature"] = p.temperature;
  j["top_p"] = p.top_p;
  j["repetition_penalty"] = p.repetition_penalty;
  j["n_completions"] = p.n_completions;
  j["max_tokens"] = p.max_tokens;
  return j;
}

GenParams gen_params_from_json(const nlohmann::json& j) {
  GenParams p;
  p.temperature = j.value("temperature", p.temperature);
  p.top_p = j.value("top_p", p.top_p);
  p.repetition_penalty = j.value("repetition_penalty", p.repetition_penalty);
  p.n_completions = j.value("n_completions", p.n_completions);
  p.max_tokens = j.value("max_tokens", p.max_tokens);
  return p;
}

PromptSpec make_prompt_spec(const Subschema& subschema, const SchemaCatalog& catalog,
                            const PromptSetting& setting, const std::vector<SeedExample>& examples,
                            const GenParams& params, const PromptTexts& texts,
                            const std::optional<ColumnFilter>& column_filter) {
  if (setting.shots < 0 || examples.size() != static_cast<std::size_t>(setting.shots))
    throw ArityError("setting " + setting.label() + " needs " + std::to_string(setting.shots) +
                     " examples, got " + std::to_string(examples.size()));
  PromptSpec spec;
  const std::set<std::string> tables(subschema.tables.begin(), subschema.tables.end());
  spec.create_statements = render_create_statements(catalog, tables, column_filter);
  spec.table_names.assign(tables.begin(), tables.end());
  if (setting.bias == ClauseBias::kGroupBy) spec.constraint_text = texts.group_by_constraint;
  if (setting.bias == ClauseBias::kOrderBy) spec.constraint_text = texts.order_by_constraint;
  spec.seed_examples = examples;
  spec.generation_params = params;
  return spec;
}

namespace {

std::string one_line(const std::string& sql) {
  std::string out;
  bool space = false;
  for (char c : sql) {
    if (c == '\n' || c == '\r' || c == '\t' || c == ' ') {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

}  // namespace

std::string render_prompt(const PromptSpec& spec) {
  std::string out = "These tables have been created:\n";
  for (const auto& stmt : spec.create_statements) out += stmt + "\n";
  out += "Write an interesting and complicated SQL query that uses all of these tables:\n";
  for (std::size_t i = 0; i < spec.table_names.size(); ++i) {
    if (i) out += ", ";
    out += spec.table_names[i];
  }
  out += "\n";
  if (spec.constraint_text) out += *spec.constraint_text + "\n";
  if (!spec.seed_examples.empty()) {
    out += "These are some examples:\n";
    for (std::size_t i = 0; i < spec.seed_examples.size(); ++i)
      out += std::to_string(i + 1) + ". " + one_line(spec.seed_examples[i].sql) + "\n";
  }
  return out;
}

std::string build_prompt(const Subschema& subschema, const SchemaCatalog& catalog,
                         const PromptSetting& setting, const std::vector<SeedExample>& examples,
                         const PromptTexts& texts, const std::optional<ColumnFilter>& column_filter) {
  return render_prompt(make_prompt_spec(subschema, catalog, setting, examples, GenParams{}, texts,
                                        column_filter));
}

}  // namespace querygen
