#include "querygen/config.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "querygen/error.h"

namespace querygen {

namespace {

namespace fs = std::filesystem;

// Reads one TOML table and remembers which keys were consumed so leftovers
// can be reported as unknown.
class Section {
 public:
  Section(const toml::table* table, std::string path) : table_(table), path_(std::move(path)) {}

  bool has(const std::string& key) const { return table_ && table_->contains(key); }

  template <typename T>
  void get(const std::string& key, T& out) {
    const toml::node* n = node(key);
    if (!n) return;
    if constexpr (std::is_same_v<T, bool>) {
      auto v = n->value<bool>();
      if (!v || !n->is_boolean()) fail(key, "expected a boolean");
      out = *v;
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!n->is_string()) fail(key, "expected a string");
      out = *n->value<std::string>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!n->is_number()) fail(key, "expected a number");
      out = static_cast<T>(*n->value<double>());
    } else if constexpr (std::is_integral_v<T>) {
      if (!n->is_integer()) fail(key, "expected an integer");
      const auto v = *n->value<std::int64_t>();
      if (std::is_unsigned_v<T> && v < 0) fail(key, "must not be negative");
      out = static_cast<T>(v);
    } else {
      static_assert(sizeof(T) == 0, "unsupported config type");
    }
  }

  std::vector<std::string> strings(const std::string& key, std::vector<std::string> fallback) {
    const toml::node* n = node(key);
    if (!n) return fallback;
    const toml::array* arr = n->as_array();
    if (!arr) fail(key, "expected an array of strings");
    std::vector<std::string> out;
    for (const auto& item : *arr) {
      if (!item.is_string()) fail(key, "expected an array of strings");
      out.push_back(*item.value<std::string>());
    }
    return out;
  }

  std::map<std::string, std::string> string_map(const std::string& key) {
    std::map<std::string, std::string> out;
    Section s = sub(key);
    if (!s.table_) return out;
    for (const auto& [k, v] : *s.table_) {
      if (!v.is_string()) s.fail(std::string(k.str()), "expected a string");
      out[std::string(k.str())] = *v.value<std::string>();
    }
    return out;
  }

  std::map<std::string, double> number_map(const std::string& key) {
    std::map<std::string, double> out;
    Section s = sub(key);
    if (!s.table_) return out;
    for (const auto& [k, v] : *s.table_) {
      if (!v.is_number()) s.fail(std::string(k.str()), "expected a number");
      out[std::string(k.str())] = *v.value<double>();
    }
    return out;
  }

  Section sub(const std::string& key) {
    const toml::node* n = node(key);
    if (!n) return Section(nullptr, qualified(key));
    if (!n->is_table()) fail(key, "expected a table");
    return Section(n->as_table(), qualified(key));
  }

  std::vector<Section> tables(const std::string& key) {
    std::vector<Section> out;
    const toml::node* n = node(key);
    if (!n) return out;
    const toml::array* arr = n->as_array();
    if (!arr) fail(key, "expected an array of tables");
    std::size_t i = 0;
    for (const auto& item : *arr) {
      if (!item.is_table()) fail(key, "expected an array of tables");
      out.emplace_back(item.as_table(), qualified(key) + "[" + std::to_string(i++) + "]");
    }
    return out;
  }

  // Throws for keys nobody asked for.
  void finish() const {
    if (!table_) return;
    for (const auto& [k, v] : *table_)
      if (!used_.count(std::string(k.str())))
        throw ConfigError("unknown config key '" + qualified(std::string(k.str())) + "'");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw ConfigError("config key '" + qualified(key) + "': " + message);
  }

 private:
  const toml::node* node(const std::string& key) {
    if (!table_) return nullptr;
    used_.insert(key);
    return table_->get(key);
  }

  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const toml::table* table_;
  std::string path_;
  std::set<std::string> used_;
};

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

void read_schema(Section s, SchemaConfig& c, const std::string& base) {
  s.get("ddl", c.ddl);
  s.get("data_dir", c.data_dir);
  c.ddl = resolve(base, c.ddl);
  c.data_dir = resolve(base, c.data_dir);
  s.get("infer_foreign_keys", c.infer_foreign_keys);
  s.get("auto_prefix", c.inference.auto_prefix);
  c.inference.prefixes = s.string_map("prefixes");
  auto labels = s.strings("label_columns", {});
  c.profile.label_columns = {labels.begin(), labels.end()};
  s.get("sample_limit", c.profile.sample_limit);
  s.get("enumeration_threshold", c.profile.enumeration_threshold);
  s.get("label_fraction", c.profile.label_fraction);
  s.finish();
}

void read_subschemas(Section s, SubschemaConfig& c) {
  s.get("min_tables", c.min_tables);
  if (s.has("max_tables")) {
    std::size_t m = 0;
    s.get("max_tables", m);
    c.max_tables = m;
  }
  s.get("provenance", c.provenance);
  c.include = s.strings("include", {});
  s.finish();
}

void read_mechanical(Section s, MechanicalConfig& c) {
  s.get("pool_size", c.pool_size);
  s.get("emit", c.emit);
  auto& g = c.generator;
  s.get("p_where", g.p_where);
  s.get("p_group_by", g.p_group_by);
  s.get("p_order_by", g.p_order_by);
  s.get("p_having", g.p_having);
  s.get("p_aggregate", g.p_aggregate);
  s.get("max_predicates", g.max_predicates);
  g.aggregate_functions = s.strings("aggregate_functions", g.aggregate_functions);
  s.get("projection_min", g.projection_count_range.first);
  s.get("projection_max", g.projection_count_range.second);
  s.finish();
}

void read_llm(Section s, LlmConfig& c, const std::string& base) {
  s.get("enabled", c.enabled);
  if (s.has("settings")) {
    c.settings.clear();
    for (const auto& label : s.strings("settings", {}))
      c.settings.push_back(PromptSetting::from_label(label));
  }
  s.get("prompts_per_setting", c.prompts_per_setting);
  s.get("bias_weight", c.bias_weight);
  s.get("backend", c.backend);
  s.get("stub_dir", c.stub_dir);
  c.stub_dir = resolve(base, c.stub_dir);
  s.get("model", c.model);
  s.get("max_attempts", c.max_attempts);
  s.get("concurrency", c.concurrency);
  s.get("group_by_constraint", c.texts.group_by_constraint);
  s.get("order_by_constraint", c.texts.order_by_constraint);

  Section p = s.sub("params");
  p.get("temperature", c.params.temperature);
  p.get("top_p", c.params.top_p);
  p.get("repetition_penalty", c.params.repetition_penalty);
  p.get("n_completions", c.params.n_completions);
  p.get("max_tokens", c.params.max_tokens);
  p.finish();

  Section h = s.sub("http");
  h.get("url", c.http.url);
  h.get("api_key_env", c.http.api_key_env);
  h.get("style", c.http.style);
  h.get("timeout_ms", c.http.timeout_ms);
  h.finish();
  c.http.model = c.model;
  s.finish();
}

void read_execution(Section s, ExecutionConfig& c, const std::string& base) {
  s.get("enabled", c.enabled);
  s.get("timeout_ms", c.timeout_ms);
  s.get("min_empty_runtime_ms", c.min_empty_runtime_ms);
  for (auto& e : s.tables("engines")) {
    EngineSpec spec;
    e.get("engine_id", spec.engine_id);
    e.get("driver", spec.driver);
    e.get("connection", spec.connection);
    e.get("worker_count", spec.worker_count);
    e.get("data_dir", spec.data_dir);
    spec.data_dir = resolve(base, spec.data_dir);
    if (spec.driver == "sqlite" && spec.connection != ":memory:")
      spec.connection = resolve(base, spec.connection);
    e.get("max_rows_per_table", spec.max_rows_per_table);
    e.get("catalog", spec.catalog);
    e.get("schema", spec.schema);
    e.get("user", spec.user);
    e.finish();
    c.engines.push_back(std::move(spec));
  }
  s.finish();
}

void check_probability(double p, const char* name) {
  if (!(p >= 0 && p <= 1)) throw ConfigError(std::string(name) + " must be in [0,1]");
}

}  // namespace

void PipelineConfig::validate() const {
  if (schema.ddl.empty()) throw ConfigError("schema.ddl is required");
  if (subschemas.min_tables < 1) throw ConfigError("subschemas.min_tables must be at least 1");
  if (subschemas.max_tables && *subschemas.max_tables < subschemas.min_tables)
    throw ConfigError("subschemas.max_tables is below min_tables");
  if (subschemas.provenance != "all" && subschemas.provenance != "declared" &&
      subschemas.provenance != "inferred")
    throw ConfigError("subschemas.provenance must be all, declared or inferred");
  mechanical.generator.validate();
  if (llm.enabled) {
    llm.params.validate();
    if (llm.settings.empty()) throw ConfigError("llm.settings is empty");
    check_probability(llm.bias_weight, "llm.bias_weight");
    if (llm.backend == "stub") {
      if (llm.stub_dir.empty()) throw ConfigError("llm.stub_dir is required for the stub backend");
    } else if (llm.backend == "http") {
      if (llm.http.url.empty()) throw ConfigError("llm.http.url is required for the http backend");
      if (llm.http.style != "completions" && llm.http.style != "chat")
        throw ConfigError("llm.http.style must be completions or chat");
    } else {
      throw ConfigError("llm.backend must be stub or http");
    }
    if (llm.max_attempts < 1) throw ConfigError("llm.max_attempts must be at least 1");
    if (llm.concurrency < 1) throw ConfigError("llm.concurrency must be at least 1");
    for (const auto& s : llm.settings)
      if (s.shots > 0 && mechanical.pool_size < static_cast<std::size_t>(s.shots))
        throw ConfigError("mechanical.pool_size is smaller than the largest shot count");
  }
  if (!llm.enabled && !mechanical.emit)
    throw ConfigError("nothing to generate: llm is disabled and mechanical.emit is false");
  check_probability(coverage.table_min_fraction, "coverage.table_min_fraction");
  check_probability(coverage.column_min_fraction, "coverage.column_min_fraction");
  for (const auto& [clause, f] : coverage.clause_min_fraction) {
    if (clause != "group_by" && clause != "having" && clause != "order_by")
      throw ConfigError("coverage.clause_min_fraction: unknown clause '" + clause + "'");
    check_probability(f, "coverage.clause_min_fraction");
  }
  if (loop.limit < 0) throw ConfigError("loop.limit must be non-negative");
  if (selection.strategy != "stratified" && selection.strategy != "first_n")
    throw ConfigError("selection.strategy must be stratified or first_n");
  if (execution.enabled) {
    if (execution.engines.empty()) throw ConfigError("execution.engines is empty");
    if (!(execution.timeout_ms > 0)) throw ConfigError("execution.timeout_ms must be positive");
    if (!(execution.min_empty_runtime_ms >= 0))
      throw ConfigError("execution.min_empty_runtime_ms must be non-negative");
    std::set<std::string> ids;
    for (const auto& e : execution.engines) {
      if (e.engine_id.empty()) throw ConfigError("every engine needs an engine_id");
      if (!ids.insert(e.engine_id).second)
        throw ConfigError("duplicate engine_id '" + e.engine_id + "'");
      if (e.driver != "sqlite" && e.driver != "presto")
        throw ConfigError("engine '" + e.engine_id + "': driver must be sqlite or presto");
      if (e.worker_count < 1) throw ConfigError("engine '" + e.engine_id + "': worker_count < 1");
    }
  }
}

PipelineConfig parse_config(std::string_view text, const std::string& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML parse error at line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }
  PipelineConfig c;
  Section s(&root, "");
  s.get("seed", c.seed);
  s.get("out_dir", c.out_dir);
  c.out_dir = resolve(base_dir, c.out_dir);
  read_schema(s.sub("schema"), c.schema, base_dir);
  read_subschemas(s.sub("subschemas"), c.subschemas);
  read_mechanical(s.sub("mechanical"), c.mechanical);
  read_llm(s.sub("llm"), c.llm, base_dir);
  {
    Section v = s.sub("validator");
    v.get("require_all_subschema_tables", c.validator.require_all_subschema_tables);
    v.get("literal_placeholders", c.validator.literal_placeholders);
    v.finish();
  }
  {
    Section v = s.sub("coverage");
    v.get("table_min_fraction", c.coverage.table_min_fraction);
    v.get("column_min_fraction", c.coverage.column_min_fraction);
    if (v.has("clause_min_fraction")) c.coverage.clause_min_fraction = v.number_map("clause_min_fraction");
    v.finish();
  }
  {
    Section v = s.sub("loop");
    v.get("limit", c.loop.limit);
    v.get("kept_target", c.loop.kept_target);
    v.finish();
  }
  {
    Section v = s.sub("selection");
    v.get("strategy", c.selection.strategy);
    v.get("size", c.selection.size);
    v.finish();
  }
  read_execution(s.sub("execution"), c.execution, base_dir);
  s.finish();
  c.mechanical.generator.seed = c.seed;
  c.validate();
  return c;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  const auto base = fs::path(path).parent_path().string();
  return parse_config(text.str(), base.empty() ? "." : base);
}

nlohmann::ordered_json to_json(const PipelineConfig& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;

  auto& s = j["schema"];
  s["ddl"] = c.schema.ddl;
  s["data_dir"] = c.schema.data_dir;
  s["infer_foreign_keys"] = c.schema.infer_foreign_keys;
  s["auto_prefix"] = c.schema.inference.auto_prefix;
  s["prefixes"] = c.schema.inference.prefixes;
  s["label_columns"] = c.schema.profile.label_columns;
  s["sample_limit"] = c.schema.profile.sample_limit;
  s["enumeration_threshold"] = c.schema.profile.enumeration_threshold;
  s["label_fraction"] = c.schema.profile.label_fraction;

  auto& sub = j["subschemas"];
  sub["min_tables"] = c.subschemas.min_tables;
  sub["max_tables"] = c.subschemas.max_tables ? nlohmann::ordered_json(*c.subschemas.max_tables) : nlohmann::ordered_json(nullptr);
  sub["provenance"] = c.subschemas.provenance;
  sub["include"] = c.subschemas.include;

  auto& m = j["mechanical"];
  m["pool_size"] = c.mechanical.pool_size;
  m["emit"] = c.mechanical.emit;
  m["generator"] = to_json(c.mechanical.generator);

  auto& l = j["llm"];
  l["enabled"] = c.llm.enabled;
  std::vector<std::string> labels;
  for (const auto& st : c.llm.settings) labels.push_back(st.label());
  l["settings"] = labels;
  l["prompts_per_setting"] = c.llm.prompts_per_setting;
  l["bias_weight"] = c.llm.bias_weight;
  l["params"] = to_json(c.llm.params);
  l["backend"] = c.llm.backend;
  l["stub_dir"] = c.llm.stub_dir;
  l["model"] = c.llm.model;
  if (c.llm.backend == "http")
    l["http"] = {{"url", c.llm.http.url},
                 {"api_key_env", c.llm.http.api_key_env},
                 {"style", c.llm.http.style},
                 {"timeout_ms", c.llm.http.timeout_ms}};
  l["max_attempts"] = c.llm.max_attempts;
  l["concurrency"] = c.llm.concurrency;
  l["group_by_constraint"] = c.llm.texts.group_by_constraint;
  l["order_by_constraint"] = c.llm.texts.order_by_constraint;

  j["validator"] = {{"require_all_subschema_tables", c.validator.require_all_subschema_tables},
                    {"literal_placeholders", c.validator.literal_placeholders}};
  j["coverage"] = {{"table_min_fraction", c.coverage.table_min_fraction},
                   {"column_min_fraction", c.coverage.column_min_fraction},
                   {"clause_min_fraction", c.coverage.clause_min_fraction}};
  j["loop"] = {{"limit", c.loop.limit}, {"kept_target", c.loop.kept_target}};
  j["selection"] = {{"strategy", c.selection.strategy}, {"size", c.selection.size}};

  auto& e = j["execution"];
  e["enabled"] = c.execution.enabled;
  e["timeout_ms"] = c.execution.timeout_ms;
  e["min_empty_runtime_ms"] = c.execution.min_empty_runtime_ms;
  e["engines"] = nlohmann::ordered_json::array();
  for (const auto& spec : c.execution.engines) e["engines"].push_back(to_json(spec));
  return j;
}

}  // namespace querygen
