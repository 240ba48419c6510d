#include <gtest/gtest.h>

#include <map>

#include <nlohmann/json.hpp>

#include "querygen/error.h"
#include "querygen/random.h"
#include "querygen/record.h"
#include "querygen/sql/normalize.h"
#include "querygen/validate.h"
#include "support.h"

namespace querygen {
namespace {

std::vector<std::string> codes(const std::vector<RejectReason>& rs) {
  std::vector<std::string> out;
  for (auto r : rs) out.emplace_back(to_string(r));
  return out;
}

TEST(Validator, FixtureCorpus) {
  const auto doc = nlohmann::json::parse(testing::read_file(testing::source_path("tests/data/validator/corpus.json")));
  const auto catalog = testing::validator_catalog(doc.at("label_columns").get<std::vector<std::string>>());
  ASSERT_TRUE(catalog.find_column("release", "version")->metadata.is_label);
  ASSERT_TRUE(catalog.find_column("release", "build_number")->metadata.is_label);
  ASSERT_TRUE(catalog.find_column("download", "status")->metadata.enumerated_values.has_value());
  std::map<std::string, int> per_code;
  for (const auto& q : doc.at("queries")) {
    const auto sql = q.at("sql").get<std::string>();
    const auto report = validate_query(sql, catalog);
    EXPECT_EQ(codes(report.rejection_reasons), q.at("expect").get<std::vector<std::string>>())
        << sql << "\n" << report.detail;
    for (const auto& c : q.at("expect")) ++per_code[c.get<std::string>()];
    if (q.at("expect").empty()) ++per_code["clean"];
  }
  EXPECT_EQ(per_code["label_arithmetic"], 10);
  EXPECT_EQ(per_code["enum_literal_violation"], 10);
  EXPECT_EQ(per_code["clean"], 10);
}

TEST(Validator, SyntaxAndUnknownObjects) {
  const auto c = testing::tpch_catalog();
  auto r = validate_query("SELECT n_name, FROM nation WHERE n_regionkey = ;", c);
  EXPECT_EQ(codes(r.rejection_reasons), (std::vector<std::string>{"syntax"}));
  EXPECT_FALSE(r.detail.empty());
  EXPECT_EQ(r.query_id, sql::query_id("SELECT n_name, FROM nation WHERE n_regionkey = ;"));
  r = validate_query("SELECT zz FROM nation", c);
  EXPECT_EQ(codes(r.rejection_reasons), (std::vector<std::string>{"unknown_object"}));
  EXPECT_NE(r.detail.find("zz"), std::string::npos);
  r = validate_query("SELECT n_name FROM nation", c);
  EXPECT_TRUE(r.accepted());
  EXPECT_EQ(r.normalized_form, "select n_name from nation");
  EXPECT_THROW(validate_syntax("SELEC 1"), SyntaxError);
}

TEST(Validator, SubschemaRelevance) {
  const auto c = testing::tpch_catalog();
  Subschema s;
  s.tables = {"nation", "region"};
  s.id = subschema_id(s.tables);
  RelevanceOptions strict;
  strict.require_all_subschema_tables = true;
  EXPECT_TRUE(validate_query("SELECT n_name FROM nation", c, &s).accepted());
  EXPECT_EQ(codes(validate_query("SELECT n_name FROM nation", c, &s, strict).rejection_reasons),
            (std::vector<std::string>{"uses_wrong_tables"}));
  EXPECT_EQ(codes(validate_query("SELECT c_name FROM customer", c, &s).rejection_reasons),
            (std::vector<std::string>{"uses_wrong_tables"}));
  EXPECT_TRUE(validate_query("SELECT n_name FROM nation JOIN region ON n_regionkey = r_regionkey", c, &s, strict)
                  .accepted());
  // Several rules report together, in the documented order.
  testing::TempDir dir;
  const auto p = testing::profiled_tpch(dir.path().string());
  EXPECT_EQ(codes(validate_query("SELECT bogus FROM customer WHERE c_mktsegment = 'SPACE'", p, &s).rejection_reasons),
            (std::vector<std::string>{"unknown_object", "enum_literal_violation", "uses_wrong_tables"}));
}

TEST(Validator, EnumLiteralsCompareNumbersByValue) {
  testing::TempDir dir;
  const auto c = testing::profiled_tpch(dir.path().string());
  EXPECT_TRUE(validate_query("SELECT r_name FROM region WHERE r_regionkey = 4.0", c).accepted());
  EXPECT_TRUE(validate_query("SELECT r_name FROM region WHERE r_name IN ('ASIA', 'EUROPE')", c).accepted());
  EXPECT_TRUE(validate_query("SELECT r_name FROM region WHERE r_name = NULL", c).accepted());
  EXPECT_FALSE(validate_query("SELECT r_name FROM region WHERE r_name = 'asia'", c).accepted());
  EXPECT_FALSE(validate_query("SELECT r_name FROM region WHERE 'MARS' <> r_name", c).accepted());
  EXPECT_FALSE(validate_query("SELECT r_name FROM region WHERE r_regionkey IN (1, 9)", c).accepted());
}

TEST(Validator, ReportJsonRoundTrip) {
  const auto c = testing::tpch_catalog();
  for (const char* sql : {"SELECT 1 FROM nation", "SELECT x FROM nation", "SELECT FROM"}) {
    const auto r = validate_query(sql, c);
    EXPECT_EQ(validation_report_from_json(nlohmann::json::parse(to_json(r).dump())), r);
  }
  for (const char* code : {"syntax", "unknown_object", "label_arithmetic", "enum_literal_violation", "duplicate",
                           "uses_wrong_tables"})
    EXPECT_EQ(to_string(reject_reason_from_string(code)), code);
  EXPECT_THROW(reject_reason_from_string("nope"), FormatError);
}

TEST(Dedup, NormalizedFormsAndLiteralPlaceholders) {
  Deduplicator exact(false), loose(true);
  EXPECT_TRUE(exact.insert("SELECT a FROM t WHERE x = 1"));
  EXPECT_FALSE(exact.insert("select  a\nfrom T where x = 1;"));
  EXPECT_TRUE(exact.insert("SELECT a FROM t WHERE x = 2"));
  EXPECT_TRUE(loose.insert("SELECT a FROM t WHERE x = 1"));
  EXPECT_FALSE(loose.insert("SELECT a FROM t WHERE x = 2"));
  EXPECT_TRUE(loose.contains("select a from t where x = 99"));
  EXPECT_EQ(loose.size(), 1u);
}

// Random variants of a few base queries: dedup keeps exactly the first of
// every normalized form, preserves order, and is idempotent.
TEST(Dedup, MatchesFirstOccurrenceOracle) {
  Rng rng(8);
  const std::vector<std::string> bases = {"SELECT a FROM t WHERE x = %", "SELECT b, c FROM u ORDER BY %",
                                          "SELECT COUNT(*) FROM v GROUP BY %"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<QueryRecord> records;
    const auto n = rng.uniform_int(0, 30);
    for (int i = 0; i < n; ++i) {
      std::string sql = rng.pick(bases);
      sql.replace(sql.find('%'), 1, std::to_string(rng.uniform_int(1, 3)));
      if (rng.bernoulli(0.3)) sql = "  " + sql + " ;";
      if (rng.bernoulli(0.3))
        for (auto& ch : sql) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      records.push_back(make_record(sql, kOriginMechanical, "s", 0));
    }
    for (bool ph : {false, true}) {
      const auto [kept, dups] = deduplicate(records, ph);
      std::set<std::string> seen;
      std::vector<std::string> expect_kept;
      for (const auto& r : records)
        if (seen.insert(sql::normalize_sql(r.sql, ph)).second) expect_kept.push_back(r.sql);
      std::vector<std::string> got;
      for (const auto& r : kept) got.push_back(r.sql);
      ASSERT_EQ(got, expect_kept);
      ASSERT_EQ(kept.size() + dups.size(), records.size());
      for (const auto& d : dups) {
        ASSERT_TRUE(d.validation.has_value());
        ASSERT_EQ(d.validation->rejection_reasons.back(), RejectReason::kDuplicate);
      }
      const auto again = deduplicate(kept, ph);
      ASSERT_EQ(again.first.size(), kept.size());
      ASSERT_TRUE(again.second.empty());
    }
  }
}

}  // namespace
}  // namespace querygen
