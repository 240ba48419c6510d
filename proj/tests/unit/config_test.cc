#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "querygen/config.h"
#include "querygen/error.h"
#include "support.h"

namespace querygen {
namespace {

const char* kMinimal = R"(
[schema]
ddl = "schema.sql"
)";

TEST(Config, DefaultsFromMinimalFile) {
  const auto c = parse_config(kMinimal, "/base");
  EXPECT_EQ(c.seed, 0u);
  EXPECT_EQ(c.schema.ddl, "/base/schema.sql");
  EXPECT_TRUE(c.schema.infer_foreign_keys);
  EXPECT_EQ(c.subschemas.min_tables, 1u);
  EXPECT_FALSE(c.subschemas.max_tables);
  EXPECT_EQ(c.subschemas.provenance, "all");
  EXPECT_EQ(c.mechanical.pool_size, 20u);
  EXPECT_TRUE(c.mechanical.emit);
  EXPECT_DOUBLE_EQ(c.mechanical.generator.p_group_by, 0.3);
  EXPECT_FALSE(c.llm.enabled);
  EXPECT_EQ(c.llm.settings.size(), 6u);
  EXPECT_DOUBLE_EQ(c.llm.bias_weight, 0.9);
  EXPECT_EQ(c.loop.limit, 0);
  EXPECT_EQ(c.selection.strategy, "stratified");
  EXPECT_FALSE(c.execution.enabled);
  EXPECT_DOUBLE_EQ(c.execution.timeout_ms, 600000);
  EXPECT_DOUBLE_EQ(c.execution.min_empty_runtime_ms, 10000);
  EXPECT_DOUBLE_EQ(c.coverage.clause_min_fraction.at("having"), 0.10);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, FullFile) {
  const auto c = parse_config(R"(
seed = 9
out_dir = "out/x"
[schema]
ddl = "/abs/schema.sql"
data_dir = "tbl"
label_columns = ["t.v"]
prefixes = { nation = "n_" }
[subschemas]
max_tables = 2
provenance = "declared"
include = ["nation,region"]
[mechanical]
pool_size = 3
p_group_by = 0.5
projection_min = 2
projection_max = 3
aggregate_functions = ["COUNT"]
[llm]
enabled = true
stub_dir = "stub"
settings = ["3shot-group_by"]
[llm.params]
n_completions = 2
[validator]
require_all_subschema_tables = true
[coverage]
column_min_fraction = 0
[coverage.clause_min_fraction]
having = 0.5
[loop]
limit = 4
kept_target = 100
[selection]
strategy = "first_n"
size = 10
[execution]
enabled = true
timeout_ms = 500
[[execution.engines]]
engine_id = "lite"
data_dir = "tbl"
max_rows_per_table = 50
[[execution.engines]]
engine_id = "presto"
driver = "presto"
connection = "http://localhost:8080"
)",
                              "/base");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.out_dir, "/base/out/x");
  EXPECT_EQ(c.schema.ddl, "/abs/schema.sql");
  EXPECT_EQ(c.schema.data_dir, "/base/tbl");
  EXPECT_EQ(c.schema.profile.label_columns, (std::set<std::string>{"t.v"}));
  EXPECT_EQ(c.schema.inference.prefixes.at("nation"), "n_");
  EXPECT_EQ(c.subschemas.max_tables, 2u);
  EXPECT_EQ(c.subschemas.include, (std::vector<std::string>{"nation,region"}));
  EXPECT_EQ(c.mechanical.generator.projection_count_range, std::make_pair(2, 3));
  EXPECT_EQ(c.llm.settings, (std::vector<PromptSetting>{{3, ClauseBias::kGroupBy}}));
  EXPECT_EQ(c.llm.stub_dir, "/base/stub");
  EXPECT_EQ(c.llm.params.n_completions, 2);
  EXPECT_TRUE(c.validator.require_all_subschema_tables);
  EXPECT_DOUBLE_EQ(c.coverage.clause_min_fraction.at("having"), 0.5);
  EXPECT_EQ(c.loop.kept_target, 100u);
  ASSERT_EQ(c.execution.engines.size(), 2u);
  EXPECT_EQ(c.execution.engines[0].data_dir, "/base/tbl");
  EXPECT_EQ(c.execution.engines[0].max_rows_per_table, 50u);
  EXPECT_EQ(c.execution.engines[1].connection, "http://localhost:8080");
  EXPECT_NO_THROW(c.validate());
  const auto j = to_json(c);
  EXPECT_EQ(j.at("seed"), 9);
  EXPECT_TRUE(j.contains("execution"));
}

TEST(Config, UnknownKeysAndBadTypesAreErrors) {
  EXPECT_THROW(parse_config(std::string(kMinimal) + "bogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_config(std::string(kMinimal) + "[loop]\nlimt = 1\n"), ConfigError);
  EXPECT_THROW(parse_config(std::string(kMinimal) + "[loop]\nlimit = \"two\"\n"), ConfigError);
  EXPECT_THROW(parse_config(std::string(kMinimal) + "[nonsense]\n"), ConfigError);
  EXPECT_THROW(parse_config("this is = = not toml"), ConfigError);
  EXPECT_THROW(parse_config(std::string(kMinimal) + "[llm]\nsettings = [\"2shot-having\"]\n"), ConfigError);
  try {
    parse_config(std::string(kMinimal) + "[llm.params]\ntemprature = 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("llm.params.temprature"), std::string::npos);
  }
}

TEST(Config, SemanticValidation) {
  auto expect_invalid = [](const std::string& extra) {
    EXPECT_THROW(parse_config(std::string(kMinimal) + extra).validate(), ConfigError) << extra;
  };
  expect_invalid("[subschemas]\nmin_tables = 0\n");
  expect_invalid("[subschemas]\nmin_tables = 3\nmax_tables = 2\n");
  expect_invalid("[subschemas]\nprovenance = \"guessed\"\n");
  expect_invalid("[mechanical]\np_where = 2.0\n");
  expect_invalid("[mechanical]\np_group_by = 0.0\n");  // p_having still 0.3
  expect_invalid("[mechanical]\nemit = false\n");
  expect_invalid("[llm]\nenabled = true\n");  // stub without a directory
  expect_invalid("[llm]\nenabled = true\nbackend = \"http\"\n");
  expect_invalid("[llm]\nenabled = true\nstub_dir = \"s\"\n[mechanical]\npool_size = 2\n");
  expect_invalid("[llm]\nenabled = true\nstub_dir = \"s\"\nbias_weight = 1.5\n");
  expect_invalid("[coverage.clause_min_fraction]\nwindow = 0.1\n");
  expect_invalid("[loop]\nlimit = -1\n");
  expect_invalid("[selection]\nstrategy = \"best\"\n");
  expect_invalid("[execution]\nenabled = true\n");
  expect_invalid("[execution]\nenabled = true\n[[execution.engines]]\nengine_id = \"a\"\n[[execution.engines]]\nengine_id = \"a\"\n");
  expect_invalid("[execution]\nenabled = true\n[[execution.engines]]\nengine_id = \"a\"\ndriver = \"db2\"\n");
  EXPECT_THROW(PipelineConfig{}.validate(), ConfigError);
}

TEST(Config, LoadFromFileResolvesAgainstItsDirectory) {
  testing::TempDir dir;
  std::filesystem::create_directories(dir.path() / "cfg");
  std::ofstream(dir.file("cfg/a.toml")) << "out_dir = \"../out\"\n" << kMinimal;
  const auto c = load_config(dir.file("cfg/a.toml"));
  EXPECT_EQ(c.schema.ddl, (dir.path() / "cfg" / "schema.sql").string());
  EXPECT_EQ(c.out_dir, (dir.path() / "out").string());
  EXPECT_THROW(load_config(dir.file("missing.toml")), ConfigError);
}

TEST(Config, ShippedConfigsParseAndValidate) {
  for (const char* name : {"configs/demo.toml", "configs/demo_exec.toml"}) {
    const auto c = load_config(testing::source_path(name));
    EXPECT_NO_THROW(c.validate()) << name;
  }
}

}  // namespace
}  // namespace querygen
