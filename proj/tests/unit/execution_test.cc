#include <gtest/gtest.h>

#include "querygen/error.h"
#include "querygen/execution.h"
#include "querygen/record.h"
#include "support.h"

namespace querygen {
namespace {

TEST(Buckets, Boundaries) {
  const std::vector<std::pair<double, RuntimeBucket>> cases = {
      {0, RuntimeBucket::kLt1s},        {999, RuntimeBucket::kLt1s},       {999.999, RuntimeBucket::kLt1s},
      {1000, RuntimeBucket::kS1To1m},   {59999, RuntimeBucket::kS1To1m},   {60000, RuntimeBucket::kM1To5m},
      {299999, RuntimeBucket::kM1To5m}, {300000, RuntimeBucket::kGt5m},    {1e9, RuntimeBucket::kGt5m}};
  for (const auto& [ms, b] : cases) EXPECT_EQ(bucket_runtime(ms), b) << ms;
  RuntimeLabel timed;
  timed.timed_out = true;
  timed.runtime_ms = 600000;
  EXPECT_EQ(bucket_runtime(timed), RuntimeBucket::kGt5m);
  EXPECT_EQ(to_string(RuntimeBucket::kS1To1m), "s1_to_1m");
}

RuntimeLabel label(double ms, std::optional<std::uint64_t> rows, bool timed_out = false,
                   std::optional<std::string> error = std::nullopt) {
  RuntimeLabel l;
  l.query_id = "q";
  l.engine_id = "e";
  l.runtime_ms = ms;
  l.row_count = rows;
  l.timed_out = timed_out;
  l.error = std::move(error);
  return l;
}

TEST(Retention, EmptyFastResultsAndErrorsDrop) {
  const auto r = apply_retention({label(9999, 0), label(10000, 0), label(5, 1), label(600000, std::nullopt, true),
                                  label(3, std::nullopt, false, "boom")});
  ASSERT_EQ(r.kept.size(), 3u);
  EXPECT_EQ(r.kept[0].runtime_ms, 10000);
  EXPECT_EQ(r.kept[1].row_count, 1u);
  EXPECT_TRUE(r.kept[2].timed_out);
  ASSERT_EQ(r.dropped.size(), 2u);
  EXPECT_EQ(r.dropped[0].second, "empty_result_below_min_runtime");
  EXPECT_EQ(r.dropped[1].second, "error");
  EXPECT_EQ(apply_retention({label(1, 0)}, 0).kept.size(), 1u);
}

TEST(RuntimeLabelJson, RoundTrip) {
  for (const auto& l : {label(12.5, 3), label(600000, std::nullopt, true), label(1, std::nullopt, false, "x")})
    EXPECT_EQ(runtime_label_from_json(nlohmann::json::parse(to_json(l).dump())), l);
}

TEST(Sqlite, ExecuteCountsRowsAndReportsErrors) {
  SqliteDriver db;
  db.exec("CREATE TABLE t (x INTEGER); INSERT INTO t VALUES (1), (2), (3);");
  auto r = db.execute("SELECT x FROM t WHERE x > 1", 1000);
  EXPECT_EQ(r.rows, 2u);
  EXPECT_FALSE(r.timed_out);
  EXPECT_FALSE(r.error);
  r = db.execute("SELECT nope FROM t", 1000);
  EXPECT_TRUE(r.error);
  EXPECT_THROW(db.exec("NOT SQL"), LoadError);
}

TEST(Sqlite, TimeoutInterruptsLongQueries) {
  SqliteDriver db;
  const auto start = std::chrono::steady_clock::now();
  const auto r = db.execute(
      "WITH RECURSIVE c(i) AS (SELECT 1 UNION ALL SELECT i + 1 FROM c) SELECT COUNT(*) FROM c", 50);
  const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  EXPECT_TRUE(r.timed_out);
  EXPECT_FALSE(r.error);
  EXPECT_LT(ms, 2000);
}

TEST(Sqlite, RestrictDatasetCapsRows) {
  testing::TempDir dir;
  write_tpch_tbl(dir.path().string(), testing::small_tpch());
  const auto catalog = testing::tpch_catalog();
  SqliteDriver db;
  const auto counts = restrict_dataset(db, catalog, dir.path().string(), 100);
  EXPECT_EQ(counts.at("region"), 5u);
  EXPECT_EQ(counts.at("nation"), 25u);
  EXPECT_EQ(counts.at("orders"), 100u);
  EXPECT_EQ(counts.at("lineitem"), 100u);
  EXPECT_EQ(db.execute("SELECT * FROM lineitem", 1000).rows, 100u);
  EXPECT_EQ(db.execute("SELECT * FROM region WHERE r_name = 'ASIA'", 1000).rows, 1u);
  EXPECT_THROW(restrict_dataset(db, catalog, dir.path().string(), 0), LoadError);
  EXPECT_THROW(restrict_dataset(db, catalog, dir.file("missing"), 10), LoadError);
}

class ScriptedDriver : public EngineDriver {
 public:
  bool connected = false;
  void connect() override { connected = true; }
  StatementResult execute(const std::string& sql, double) override {
    if (sql == "throw") throw std::runtime_error("driver exploded");
    StatementResult r;
    if (sql == "slow") r.timed_out = true;
    if (sql == "bad") r.error = "bad sql";
    if (sql == "ok") r.rows = 7;
    return r;
  }
};

TEST(ExecuteBatch, OneLabelPerRecord) {
  std::vector<QueryRecord> records;
  for (const char* s : {"ok", "slow", "bad", "throw"}) records.push_back(make_record(s, kOriginMechanical, "s", 0));
  ScriptedDriver d;
  const auto labels = execute_batch(records, d, "eng", 250);
  EXPECT_TRUE(d.connected);
  ASSERT_EQ(labels.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(labels[i].query_id, records[i].id);
    EXPECT_EQ(labels[i].engine_id, "eng");
  }
  EXPECT_EQ(labels[0].row_count, 7u);
  EXPECT_TRUE(labels[1].timed_out);
  EXPECT_EQ(labels[1].runtime_ms, 250);
  EXPECT_FALSE(labels[1].row_count);
  EXPECT_EQ(labels[2].error, "bad sql");
  EXPECT_EQ(labels[3].error, "driver exploded");
  EXPECT_THROW(execute_batch(records, d, "eng", 0), ConfigError);
}

TEST(ExecuteEngines, ParallelSqliteEngines) {
  testing::TempDir dir;
  write_tpch_tbl(dir.path().string(), testing::small_tpch());
  const auto catalog = testing::tpch_catalog();
  std::vector<QueryRecord> records = {make_record("SELECT COUNT(*) FROM nation", kOriginMechanical, "s", 0),
                                      make_record("SELECT n_name FROM nation", kOriginMechanical, "s", 0)};
  EngineSpec a;
  a.engine_id = "small";
  a.data_dir = dir.path().string();
  a.max_rows_per_table = 10;
  EngineSpec b = a;
  b.engine_id = "full";
  b.max_rows_per_table = 1000;
  const auto out = execute_engines(records, {a, b}, catalog, 5000);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out.at("small")[1].row_count, 10u);
  EXPECT_EQ(out.at("full")[1].row_count, 25u);
  EXPECT_EQ(out.at("full")[0].row_count, 1u);
  EXPECT_THROW(execute_engines(records, {a, a}, catalog), ConfigError);
  EngineSpec bad;
  bad.driver = "oracle";
  EXPECT_THROW(make_driver(bad, &catalog), ConfigError);
}

}  // namespace
}  // namespace querygen
