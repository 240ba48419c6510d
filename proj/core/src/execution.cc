#include "querygen/execution.h"

#include <chrono>
#include <future>

#include "querygen/error.h"
#include "querygen/record.h"

namespace querygen {

nlohmann::ordered_json to_json(const RuntimeLabel& l) {
  nlohmann::ordered_json j;
  j["query_id"] = l.query_id;
  j["engine_id"] = l.engine_id;
  j["runtime_ms"] = l.runtime_ms;
  j["row_count"] = l.row_count ? nlohmann::ordered_json(*l.row_count) : nlohmann::ordered_json(nullptr);
  j["timed_out"] = l.timed_out;
  j["error"] = l.error ? nlohmann::ordered_json(*l.error) : nlohmann::ordered_json(nullptr);
  return j;
}

RuntimeLabel runtime_label_from_json(const nlohmann::json& j) {
  RuntimeLabel l;
  l.query_id = j.value("query_id", std::string{});
  l.engine_id = j.value("engine_id", std::string{});
  l.runtime_ms = j.at("runtime_ms").get<double>();
  if (j.contains("row_count") && !j.at("row_count").is_null())
    l.row_count = j.at("row_count").get<std::uint64_t>();
  l.timed_out = j.value("timed_out", false);
  if (j.contains("error") && !j.at("error").is_null()) l.error = j.at("error").get<std::string>();
  return l;
}

std::string_view to_string(RuntimeBucket b) {
  switch (b) {
    case RuntimeBucket::kLt1s: return "lt_1s";
    case RuntimeBucket::kS1To1m: return "s1_to_1m";
    case RuntimeBucket::kM1To5m: return "m1_to_5m";
    case RuntimeBucket::kGt5m: return "gt_5m";
  }
  return "lt_1s";
}

RuntimeBucket bucket_runtime(double ms) {
  if (ms < 1'000) return RuntimeBucket::kLt1s;
  if (ms < 60'000) return RuntimeBucket::kS1To1m;
  if (ms < 300'000) return RuntimeBucket::kM1To5m;
  return RuntimeBucket::kGt5m;
}

RuntimeBucket bucket_runtime(const RuntimeLabel& label) { return bucket_runtime(label.runtime_ms); }

RetentionResult apply_retention(const std::vector<RuntimeLabel>& labels, double min_empty_runtime_ms) {
  RetentionResult r;
  for (const auto& l : labels) {
    if (l.error) r.dropped.emplace_back(l, "error");
    else if (!l.timed_out && l.row_count && *l.row_count == 0 && l.runtime_ms < min_empty_runtime_ms)
      r.dropped.emplace_back(l, "empty_result_below_min_runtime");
    else r.kept.push_back(l);
  }
  return r;
}

nlohmann::ordered_json to_json(const EngineSpec& e) {
  nlohmann::ordered_json j;
  j["engine_id"] = e.engine_id;
  j["driver"] = e.driver;
  j["connection"] = e.connection;
  j["worker_count"] = e.worker_count;
  if (!e.data_dir.empty()) j["data_dir"] = e.data_dir;
  j["max_rows_per_table"] = e.max_rows_per_table;
  if (e.driver == "presto") {
    j["catalog"] = e.catalog;
    j["schema"] = e.schema;
    j["user"] = e.user;
  }
  return j;
}

namespace {

class LoadingSqliteDriver : public EngineDriver {
 public:
  LoadingSqliteDriver(const EngineSpec& spec, const SchemaCatalog* catalog)
      : db_(spec.connection), spec_(spec), catalog_(catalog) {}

  void connect() override {
    if (connected_) return;
    db_.connect();
    if (!spec_.data_dir.empty()) {
      if (!catalog_) throw ConnectionError("engine '" + spec_.engine_id + "' needs a catalog to load data");
      try {
        restrict_dataset(db_, *catalog_, spec_.data_dir, spec_.max_rows_per_table);
      } catch (const LoadError& e) {
        throw ConnectionError("engine '" + spec_.engine_id + "': " + e.what());
      }
    }
    connected_ = true;
  }

  StatementResult execute(const std::string& sql, double timeout_ms) override {
    return db_.execute(sql, timeout_ms);
  }

 private:
  SqliteDriver db_;
  EngineSpec spec_;
  const SchemaCatalog* catalog_;
  bool connected_ = false;
};

}  // namespace

std::unique_ptr<EngineDriver> make_driver(const EngineSpec& spec, const SchemaCatalog* catalog) {
  if (spec.driver == "sqlite") return std::make_unique<LoadingSqliteDriver>(spec, catalog);
  if (spec.driver == "presto" || spec.driver == "trino")
    return std::make_unique<PrestoDriver>(spec.connection, spec.catalog, spec.schema, spec.user);
  throw ConfigError("unknown driver '" + spec.driver + "' for engine '" + spec.engine_id + "'");
}

std::vector<RuntimeLabel> execute_batch(const std::vector<QueryRecord>& records,
                                        EngineDriver& driver, const std::string& engine_id,
                                        double timeout_ms) {
  if (!(timeout_ms > 0)) throw ConfigError("timeout must be positive");
  driver.connect();
  std::vector<RuntimeLabel> labels;
  labels.reserve(records.size());
  for (const auto& r : records) {
    RuntimeLabel l;
    l.query_id = r.id;
    l.engine_id = engine_id;
    const auto start = std::chrono::steady_clock::now();
    StatementResult res;
    try {
      res = driver.execute(r.sql, timeout_ms);
    } catch (const std::exception& e) {
      res.error = e.what();
    }
    const auto stop = std::chrono::steady_clock::now();
    l.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    if (res.timed_out) {
      l.timed_out = true;
      l.runtime_ms = timeout_ms;
    } else if (res.error) {
      l.error = res.error;
    } else {
      l.row_count = res.rows;
    }
    labels.push_back(std::move(l));
  }
  return labels;
}

std::map<std::string, std::vector<RuntimeLabel>> execute_engines(
    const std::vector<QueryRecord>& records, const std::vector<EngineSpec>& engines,
    const SchemaCatalog& catalog, double timeout_ms) {
  std::map<std::string, std::future<std::vector<RuntimeLabel>>> running;
  for (const auto& spec : engines) {
    if (running.count(spec.engine_id))
      throw ConfigError("duplicate engine id '" + spec.engine_id + "'");
    running[spec.engine_id] = std::async(std::launch::async, [&records, spec, &catalog, timeout_ms] {
      auto driver = make_driver(spec, &catalog);
      return execute_batch(records, *driver, spec.engine_id, timeout_ms);
    });
  }
  std::map<std::string, std::vector<RuntimeLabel>> out;
  for (auto& [id, f] : running) out[id] = f.get();
  return out;
}

}  // namespace querygen
