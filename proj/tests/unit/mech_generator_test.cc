#include <gtest/gtest.h>

#include "querygen/error.h"
#include "querygen/mech_generator.h"
#include "querygen/record.h"
#include "querygen/validate.h"
#include "support.h"

namespace querygen {
namespace {

class MechGenerator : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir;
    catalog_ = new SchemaCatalog(testing::profiled_tpch(dir_->path().string()));
    subschemas_ = new std::vector<Subschema>(enumerate_subschemas(build_join_graph(*catalog_)));
  }
  static void TearDownTestSuite() {
    delete subschemas_;
    delete catalog_;
    delete dir_;
  }
  static inline testing::TempDir* dir_ = nullptr;
  static inline SchemaCatalog* catalog_ = nullptr;
  static inline std::vector<Subschema>* subschemas_ = nullptr;
};

TEST_F(MechGenerator, EveryQueryPassesTheValidatorOnEverySubschema) {
  MechConfig config;
  config.seed = 17;
  RelevanceOptions strict;
  strict.require_all_subschema_tables = true;
  std::size_t total = 0;
  for (const auto& s : *subschemas_) {
    for (const auto& sql : generate_mechanical_sql(s, *catalog_, config, 8)) {
      const auto report = validate_query(sql, *catalog_, &s, strict);
      ASSERT_TRUE(report.accepted()) << sql << "\n" << report.detail;
      ++total;
    }
  }
  EXPECT_EQ(total, subschemas_->size() * 8);
}

TEST_F(MechGenerator, DeterministicPerSeedAndSubschema) {
  MechConfig config;
  config.seed = 5;
  const auto& s = subschemas_->at(50);
  const auto a = generate_mechanical_sql(s, *catalog_, config, 40);
  EXPECT_EQ(a, generate_mechanical_sql(s, *catalog_, config, 40));
  // A longer request extends the same stream.
  const auto longer = generate_mechanical_sql(s, *catalog_, config, 60);
  EXPECT_TRUE(std::equal(a.begin(), a.end(), longer.begin()));
  config.seed = 6;
  EXPECT_NE(a, generate_mechanical_sql(s, *catalog_, config, 40));
}

TEST_F(MechGenerator, ClauseProbabilitiesAtTheExtremes) {
  MechConfig config;
  config.seed = 1;
  config.p_where = 0;
  config.p_group_by = 0;
  config.p_having = 0;  // HAVING needs GROUP BY
  config.p_order_by = 1;
  const auto& s = subschemas_->at(60);
  for (const auto& sql : generate_mechanical_sql(s, *catalog_, config, 200)) {
    const auto f = clause_features(sql);
    ASSERT_FALSE(f.count("where")) << sql;
    ASSERT_FALSE(f.count("group_by")) << sql;
    ASSERT_FALSE(f.count("having")) << sql;
    ASSERT_TRUE(f.count("order_by")) << sql;
  }
  config.p_group_by = 1;
  config.p_having = 1;
  config.p_where = 1;
  for (const auto& sql : generate_mechanical_sql(s, *catalog_, config, 200)) {
    const auto f = clause_features(sql);
    ASSERT_TRUE(f.count("where") && f.count("group_by") && f.count("having")) << sql;
  }
}

TEST_F(MechGenerator, RecordsCarryOriginAndIds) {
  MechConfig config;
  const auto& s = subschemas_->at(3);
  const auto recs = generate_mechanical(s, *catalog_, config, 5, 2);
  ASSERT_EQ(recs.size(), 5u);
  for (const auto& r : recs) {
    EXPECT_EQ(r.origin, kOriginMechanical);
    EXPECT_EQ(r.subschema_id, s.id);
    EXPECT_EQ(r.batch, 2);
    EXPECT_EQ(r.id, make_record(r.sql, "mechanical", s.id, 2).id);
    EXPECT_NO_THROW(check_record(r));
  }
}

TEST_F(MechGenerator, MismatchedSubschemaThrows) {
  Subschema bogus;
  bogus.tables = {"nowhere"};
  bogus.id = subschema_id(bogus.tables);
  EXPECT_THROW(generate_mechanical_sql(bogus, *catalog_, {}, 1), UnknownObjectError);
}

TEST(MechConfigTest, Validation) {
  MechConfig c;
  EXPECT_NO_THROW(c.validate());
  c.p_where = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.projection_count_range = {3, 2};
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.max_predicates = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.p_group_by = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c.p_having = 0;
  EXPECT_NO_THROW(c.validate());
  c = {};
  c.aggregate_functions = {"MEDIAN"};
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(ClauseFeatures, TopLevelTags) {
  EXPECT_EQ(clause_features("SELECT a FROM t JOIN u ON t.x = u.x WHERE a > 1 GROUP BY a HAVING COUNT(*) > 1 "
                            "ORDER BY a LIMIT 5"),
            (std::set<std::string>{"where", "group_by", "having", "order_by", "limit", "join", "aggregate"}));
  EXPECT_EQ(clause_features("SELECT a FROM t, u"), (std::set<std::string>{"join"}));
  EXPECT_TRUE(clause_features("not sql").empty());
}

std::vector<QueryRecord> feature_pool(std::size_t tagged, std::size_t untagged) {
  std::vector<QueryRecord> pool;
  for (std::size_t i = 0; i < tagged; ++i)
    pool.push_back(make_record("SELECT a FROM t GROUP BY a HAVING a > " + std::to_string(i), "mechanical", "s", 0));
  for (std::size_t i = 0; i < untagged; ++i)
    pool.push_back(make_record("SELECT a FROM t WHERE a = " + std::to_string(i), "mechanical", "s", 0));
  return pool;
}

TEST(SeedExamples, DistinctDeterministicAndSized) {
  const auto pool = feature_pool(6, 6);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto a = select_seed_examples(pool, 5, std::nullopt, 0.9, seed);
    ASSERT_EQ(a.size(), 5u);
    std::set<std::string> ids;
    for (const auto& e : a) ids.insert(e.id);
    ASSERT_EQ(ids.size(), 5u);
    ASSERT_EQ(a, select_seed_examples(pool, 5, std::nullopt, 0.9, seed));
  }
  EXPECT_TRUE(select_seed_examples(pool, 0, std::nullopt, 0.9, 1).empty());
  EXPECT_EQ(select_seed_examples(pool, 12, std::string("having"), 1.0, 1).size(), 12u);
  EXPECT_THROW(select_seed_examples(pool, 13, std::nullopt, 0.9, 1), InsufficientPoolError);
}

TEST(SeedExamples, BiasWeightControlsTaggedShare) {
  const auto pool = feature_pool(20, 20);
  int tagged = 0;
  const int trials = 4000;
  for (int seed = 0; seed < trials; ++seed) {
    const auto ex = select_seed_examples(pool, 1, std::string("having"), 0.9, static_cast<std::uint64_t>(seed));
    tagged += ex[0].features.count("having") ? 1 : 0;
  }
  // Binomial(4000, 0.9): sd is about 19.
  EXPECT_NEAR(tagged, 3600, 80);
  for (int seed = 0; seed < 200; ++seed) {
    const auto ex = select_seed_examples(pool, 3, std::string("having"), 1.0, static_cast<std::uint64_t>(seed));
    for (const auto& e : ex) ASSERT_TRUE(e.features.count("having"));
  }
  // Exhausted tagged part falls back to the rest.
  const auto small = feature_pool(1, 5);
  for (int seed = 0; seed < 50; ++seed)
    ASSERT_EQ(select_seed_examples(small, 4, std::string("having"), 1.0, static_cast<std::uint64_t>(seed)).size(), 4u);
}

}  // namespace
}  // namespace querygen
