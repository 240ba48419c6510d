#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "querygen/catalog.h"

namespace querygen {

struct QueryRecord;

inline constexpr double kDefaultTimeoutMs = 600'000;
inline constexpr double kDefaultMinEmptyRuntimeMs = 10'000;

struct RuntimeLabel {
  std::string query_id;
  std::string engine_id;
  double runtime_ms = 0;
  std::optional<std::uint64_t> row_count;
  bool timed_out = false;
  std::optional<std::string> error;

  friend bool operator==(const RuntimeLabel&, const RuntimeLabel&) = default;
};

nlohmann::ordered_json to_json(const RuntimeLabel& l);
RuntimeLabel runtime_label_from_json(const nlohmann::json& j);

enum class RuntimeBucket { kLt1s, kS1To1m, kM1To5m, kGt5m };
std::string_view to_string(RuntimeBucket b);

// [0,1s) [1s,1m) [1m,5m) [5m,inf)
RuntimeBucket bucket_runtime(double runtime_ms);
RuntimeBucket bucket_runtime(const RuntimeLabel& label);

struct RetentionResult {
  std::vector<RuntimeLabel> kept;
  std::vector<std::pair<RuntimeLabel, std::string>> dropped;  // label, reason
};

// Drops errored labels and empty results faster than min_empty_runtime_ms.
RetentionResult apply_retention(const std::vector<RuntimeLabel>& labels,
                                double min_empty_runtime_ms = kDefaultMinEmptyRuntimeMs);

struct StatementResult {
  std::uint64_t rows = 0;
  bool timed_out = false;
  std::optional<std::string> error;
};

// One connection to one engine. Implementations consume the full result.
class EngineDriver {
 public:
  virtual ~EngineDriver() = default;
  // Throws ConnectionError.
  virtual void connect() = 0;
  virtual StatementResult execute(const std::string& sql, double timeout_ms) = 0;
};

struct EngineSpec {
  std::string engine_id;
  std::string driver = "sqlite";  // "sqlite" | "presto"
  // sqlite: database path (":memory:" allowed); presto: base URL.
  std::string connection = ":memory:";
  int worker_count = 1;
  // sqlite: optional directory of .tbl/.csv files loaded on connect.
  std::string data_dir;
  std::uint64_t max_rows_per_table = 40'000;
  // presto
  std::string catalog = "tpch";
  std::string schema = "tiny";
  std::string user = "querygen";
};

nlohmann::ordered_json to_json(const EngineSpec& e);

// `catalog` is needed by the sqlite driver to create tables for data_dir.
std::unique_ptr<EngineDriver> make_driver(const EngineSpec& spec, const SchemaCatalog* catalog);

// Serial execution, one label per record, wall-clock around execute().
// Timed-out labels carry runtime_ms = timeout_ms. Throws ConnectionError
// only when the engine cannot be reached up front.
std::vector<RuntimeLabel> execute_batch(const std::vector<QueryRecord>& records,
                                        EngineDriver& driver, const std::string& engine_id,
                                        double timeout_ms = kDefaultTimeoutMs);

// Runs every engine on its own thread; results keyed by engine id.
std::map<std::string, std::vector<RuntimeLabel>> execute_engines(
    const std::vector<QueryRecord>& records, const std::vector<EngineSpec>& engines,
    const SchemaCatalog& catalog, double timeout_ms = kDefaultTimeoutMs);

class SqliteDriver : public EngineDriver {
 public:
  explicit SqliteDriver(std::string path = ":memory:");
  ~SqliteDriver() override;
  SqliteDriver(const SqliteDriver&) = delete;
  SqliteDriver& operator=(const SqliteDriver&) = delete;

  void connect() override;
  StatementResult execute(const std::string& sql, double timeout_ms) override;

  // Runs statements without timing; throws LoadError.
  void exec(const std::string& sql);
  void create_tables(const SchemaCatalog& catalog);
  // Inserts rows (already split into fields) into `table`; throws LoadError.
  void insert_rows(const TableDef& table, const std::vector<std::vector<std::string>>& rows);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Creates the catalog's tables and loads at most max_rows_per_table rows of
// each from <dir>/<table>.tbl (pipe-delimited) or .csv (header row).
// Returns rows loaded per table. Throws LoadError for max_rows_per_table 0,
// a missing file or a malformed row.
std::map<std::string, std::uint64_t> restrict_dataset(SqliteDriver& db,
                                                      const SchemaCatalog& catalog,
                                                      const std::string& data_dir,
                                                      std::uint64_t max_rows_per_table);

// Presto / Trino REST protocol: POST <url>/v1/statement, then follow nextUri
// until it disappears, counting data rows. Cancels with DELETE on timeout.
class PrestoDriver : public EngineDriver {
 public:
  PrestoDriver(std::string base_url, std::string catalog, std::string schema, std::string user);
  void connect() override;
  StatementResult execute(const std::string& sql, double timeout_ms) override;

 private:
  StatementResult poll(const std::string& sql, const std::map<std::string, std::string>& headers,
                       std::chrono::steady_clock::time_point deadline,
                       const std::function<int()>& remaining_ms, std::string& next);
  void cancel(const std::string& next_uri, const std::map<std::string, std::string>& headers);

  std::string base_url_;
  std::string catalog_;
  std::string schema_;
  std::string user_;
};

}  // namespace querygen
