#include <gtest/gtest.h>

#include <filesystem>

#include "querygen/config.h"
#include "querygen/error.h"
#include "querygen/pipeline.h"
#include "support.h"

namespace querygen {
namespace {

PipelineConfig mechanical_only(const std::string& out) {
  PipelineConfig c;
  c.seed = 3;
  c.out_dir = out;
  c.schema.ddl = testing::source_path("data/tpch/schema.sql");
  c.subschemas.max_tables = 2;
  c.mechanical.pool_size = 3;
  return c;
}

PipelineConfig stub_ten(const std::string& out) {
  PipelineConfig c = mechanical_only(out);
  c.subschemas.include = {"nation,region"};
  c.mechanical.emit = false;
  c.llm.enabled = true;
  c.llm.settings = {{0, ClauseBias::kNone}};
  c.llm.params.n_completions = 10;
  c.llm.stub_dir = testing::source_path("data/stub");
  return c;
}

std::uint64_t rejected(const nlohmann::json& counts, const std::string& reason) {
  return counts.at("rejected").value(reason, std::uint64_t{0});
}

TEST(Pipeline, MechanicalOnlySingleBatch) {
  testing::TempDir dir;
  const auto config = mechanical_only(dir.file("out"));
  const auto result = run_pipeline(config);
  const auto& m = result.manifest;
  EXPECT_EQ(m.at("status"), "ok");
  ASSERT_EQ(m.at("batches").size(), 1u);
  const auto& b = m.at("batches")[0];
  EXPECT_EQ(b.at("stop_reason"), "loop_limit");
  EXPECT_EQ(b.at("llm_calls"), 0);
  // 8 single tables + 10 edges, three queries each.
  EXPECT_EQ(m.at("subschemas"), 18);
  EXPECT_EQ(b.at("generated"), 54);
  EXPECT_EQ(b.at("generated").get<std::uint64_t>(),
            b.at("kept").get<std::uint64_t>() + b.at("deduplicated").get<std::uint64_t>() +
                b.at("rejected_total").get<std::uint64_t>());
  EXPECT_EQ(b.at("rejected_total"), 0);
  EXPECT_EQ(result.corpus.size(), b.at("kept").get<std::size_t>());
  for (const auto& r : result.corpus) {
    EXPECT_EQ(r.origin, kOriginMechanical);
    ASSERT_TRUE(r.validation && r.validation->accepted());
    ASSERT_TRUE(r.profile.has_value());
  }
  for (const char* f : {"catalog.json", "subschemas.jsonl", "batches/batch-0.jsonl", "checkpoint.json",
                        "corpus.jsonl", "coverage.json", "coverage_facets.csv", "coverage_clauses.csv",
                        "manifest.json"})
    EXPECT_TRUE(std::filesystem::exists(dir.path() / "out" / f)) << f;
  EXPECT_FALSE(std::filesystem::exists(dir.path() / "out" / "labeled.jsonl"));
}

TEST(Pipeline, StubCompletionsAccounting) {
  testing::TempDir dir;
  const auto result = run_pipeline(stub_ten(dir.file("out")));
  const auto& b = result.manifest.at("batches")[0];
  EXPECT_EQ(b.at("llm_calls"), 1);
  EXPECT_EQ(b.at("llm_failures"), 0);
  EXPECT_EQ(b.at("generated"), 10);
  EXPECT_EQ(b.at("kept"), 8);
  EXPECT_EQ(b.at("deduplicated"), 1);
  EXPECT_EQ(rejected(b, "syntax"), 1);
  EXPECT_EQ(b.at("rejected_total"), 1);
  ASSERT_EQ(result.corpus.size(), 8u);
  for (const auto& r : result.corpus) {
    EXPECT_EQ(r.origin, kOriginLlm);
    EXPECT_EQ(r.prompt_setting, (PromptSetting{0, ClauseBias::kNone}));
    EXPECT_EQ(r.model_name, "stub");
    EXPECT_TRUE(r.prompt_hash.has_value());
    EXPECT_TRUE(r.example_ids.empty());
    EXPECT_NO_THROW(check_record(r));
  }
  // Every candidate is kept on disk with its verdict.
  const auto all = read_records(dir.file("out/batches/batch-0.jsonl"));
  EXPECT_EQ(all.size(), 10u);
}

TEST(Pipeline, ThreeShotPromptsUseThePool) {
  testing::TempDir dir;
  auto config = stub_ten(dir.file("out"));
  config.llm.settings = {{3, ClauseBias::kGroupBy}};
  config.llm.params.n_completions = 2;
  const auto result = run_pipeline(config);
  ASSERT_FALSE(result.corpus.empty());
  for (const auto& r : result.corpus) EXPECT_EQ(r.example_ids.size(), 3u);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "out/batches/pool-0.jsonl"));
}

TEST(Pipeline, DeterministicAcrossRuns) {
  testing::TempDir a, b;
  auto ca = stub_ten(a.file("out"));
  ca.subschemas.include.clear();
  ca.mechanical.emit = true;
  ca.llm.settings = canonical_prompt_settings();
  ca.llm.prompts_per_setting = 2;
  ca.llm.params.n_completions = 3;
  ca.loop.limit = 2;
  auto cb = ca;
  cb.out_dir = b.file("out");
  run_pipeline(ca);
  run_pipeline(cb);
  for (const char* f : {"corpus.jsonl", "manifest.json", "coverage.json", "batches/batch-1.jsonl"})
    EXPECT_EQ(testing::read_file(a.file(std::string("out/") + f)), testing::read_file(b.file(std::string("out/") + f)))
        << f;
  cb.seed = 4;
  run_pipeline(cb);
  EXPECT_NE(testing::read_file(a.file("out/corpus.jsonl")), testing::read_file(b.file("out/corpus.jsonl")));
}

TEST(Pipeline, ResumeReusesMatchingBatches) {
  testing::TempDir dir;
  auto config = mechanical_only(dir.file("out"));
  config.loop.limit = 1;
  config.coverage.column_min_fraction = 0.5;  // force gaps so batch 1 runs
  const auto first = run_pipeline(config);
  EXPECT_TRUE(first.resumed_batches.empty());
  ASSERT_EQ(first.manifest.at("batches").size(), 2u);
  const auto manifest = testing::read_file(dir.file("out/manifest.json"));
  const auto second = run_pipeline(config);
  EXPECT_EQ(second.resumed_batches, (std::vector<int>{0, 1}));
  EXPECT_EQ(testing::read_file(dir.file("out/manifest.json")), manifest);

  // A different generator config invalidates the checkpoint.
  config.mechanical.pool_size = 4;
  const auto third = run_pipeline(config);
  EXPECT_TRUE(third.resumed_batches.empty());
}

TEST(Pipeline, IterativeLoopFollowsDirectives) {
  testing::TempDir dir;
  auto config = mechanical_only(dir.file("out"));
  config.loop.limit = 3;
  config.coverage.clause_min_fraction = {{"having", 0.9}};
  const auto m = run_pipeline(config).manifest;
  const auto& batches = m.at("batches");
  ASSERT_EQ(batches.size(), 4u);
  EXPECT_TRUE(batches[0].at("directives").is_null());
  EXPECT_EQ(batches[1].at("directives").at("bias_override"), "group_by");
  EXPECT_EQ(batches.back().at("stop_reason"), "loop_limit");
  std::uint64_t kept = 0;
  for (const auto& b : batches) kept += b.at("kept").get<std::uint64_t>();
  EXPECT_EQ(m.at("totals").at("kept"), kept);

  config.coverage = {};
  config.coverage.column_min_fraction = 0;
  config.coverage.table_min_fraction = 0;
  config.coverage.clause_min_fraction.clear();
  config.out_dir = dir.file("out2");
  const auto done = run_pipeline(config).manifest;
  ASSERT_EQ(done.at("batches").size(), 1u);
  EXPECT_EQ(done.at("batches")[0].at("stop_reason"), "no_gaps");
}

TEST(Pipeline, SelectionStrategies) {
  std::vector<QueryRecord> kept;
  for (int i = 0; i < 6; ++i) kept.push_back(make_record("SELECT " + std::to_string(i), kOriginMechanical, "s", 0));
  for (int i = 0; i < 2; ++i) {
    auto r = make_record("SELECT 1" + std::to_string(i), kOriginLlm, "s", 0);
    r.prompt_setting = PromptSetting{0, ClauseBias::kNone};
    kept.push_back(r);
  }
  SelectionConfig first{"first_n", 3};
  auto sel = select_records(kept, first);
  ASSERT_EQ(sel.size(), 3u);
  EXPECT_EQ(sel[2].sql, "SELECT 2");
  SelectionConfig strat{"stratified", 4};
  sel = select_records(kept, strat);
  ASSERT_EQ(sel.size(), 4u);
  int llm = 0;
  for (const auto& r : sel) llm += r.origin == kOriginLlm;
  EXPECT_EQ(llm, 2);
  // Original order is preserved.
  EXPECT_EQ(sel[0].sql, "SELECT 0");
  EXPECT_EQ(sel[1].sql, "SELECT 1");
  EXPECT_EQ(select_records(kept, {"stratified", 0}).size(), 8u);
  EXPECT_EQ(select_records(kept, {"first_n", 100}).size(), 8u);
}

TEST(Pipeline, FailureWritesManifest) {
  testing::TempDir dir;
  auto config = mechanical_only(dir.file("out"));
  config.schema.ddl = dir.file("nope.sql");
  EXPECT_THROW(run_pipeline(config), Error);
  const auto m = nlohmann::json::parse(testing::read_file(dir.file("out/manifest.json")));
  EXPECT_EQ(m.at("status"), "failed");
  EXPECT_EQ(m.at("error").at("stage"), "preprocess");

  config = mechanical_only(dir.file("out2"));
  config.subschemas.include = {"part,region"};
  EXPECT_THROW(run_pipeline(config), ConfigError);
  const auto m2 = nlohmann::json::parse(testing::read_file(dir.file("out2/manifest.json")));
  EXPECT_EQ(m2.at("error").at("stage"), "subschemas");
  EXPECT_EQ(m2.at("error").at("code"), "config");
}

TEST(Pipeline, ExecutionStageLabelsCorpus) {
  testing::TempDir dir;
  write_tpch_tbl(dir.file("tbl"), testing::small_tpch());
  auto config = mechanical_only(dir.file("out"));
  config.schema.data_dir = dir.file("tbl");
  config.selection = {"first_n", 20};
  config.execution.enabled = true;
  config.execution.min_empty_runtime_ms = 0;
  EngineSpec e;
  e.engine_id = "sqlite";
  e.data_dir = dir.file("tbl");
  config.execution.engines = {e};
  const auto m = run_pipeline(config).manifest;
  EXPECT_EQ(m.at("execution").at("executed"), 20);
  const auto labeled = read_records(dir.file("out/labeled.jsonl"));
  EXPECT_EQ(labeled.size(), m.at("execution").at("retained").get<std::size_t>());
  for (const auto& r : labeled) {
    ASSERT_EQ(r.labels.count("sqlite"), 1u);
    EXPECT_FALSE(r.labels.at("sqlite").error) << r.sql << ": " << *r.labels.at("sqlite").error;
  }
}

}  // namespace
}  // namespace querygen
