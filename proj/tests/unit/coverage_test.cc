#include <gtest/gtest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "querygen/coverage.h"
#include "querygen/error.h"
#include "support.h"

namespace querygen {
namespace {

using Counts = std::map<std::string, std::uint64_t>;

ComplexityProfile expected_profile(const nlohmann::json& q) {
  ComplexityProfile p;
  p.join_count = q.at("join_count").get<std::uint64_t>();
  p.clause_counts = q.at("clause_counts").get<Counts>();
  p.operator_counts = q.at("operator_counts").get<Counts>();
  p.function_counts = q.at("function_counts").get<Counts>();
  p.subselect_count = q.at("subselect_count").get<std::uint64_t>();
  p.referenced_tables = q.at("referenced_tables").get<Counts>();
  p.referenced_columns = q.at("referenced_columns").get<Counts>();
  return p;
}

TEST(Coverage, HandProfiledCorpus) {
  const auto doc = nlohmann::json::parse(testing::read_file(testing::source_path("tests/data/coverage_corpus.json")));
  const auto catalog = testing::tpch_catalog();
  ASSERT_GE(doc.at("queries").size(), 20u);
  for (const auto& q : doc.at("queries")) {
    const auto sql = q.at("sql").get<std::string>();
    SCOPED_TRACE(sql);
    const auto got = profile_query(sql, catalog);
    const auto want = expected_profile(q);
    EXPECT_EQ(got.join_count, want.join_count);
    EXPECT_EQ(got.clause_counts, want.clause_counts);
    EXPECT_EQ(got.operator_counts, want.operator_counts);
    EXPECT_EQ(got.function_counts, want.function_counts);
    EXPECT_EQ(got.subselect_count, want.subselect_count);
    EXPECT_EQ(got.referenced_tables, want.referenced_tables);
    EXPECT_EQ(got.referenced_columns, want.referenced_columns);
  }
}

TEST(Coverage, GroupByHavingOrderByExample) {
  const auto c = ingest_ddl("CREATE TABLE t (a INT, b INT);");
  const auto p = profile_query("SELECT a, COUNT(*) FROM t GROUP BY a HAVING COUNT(*) > 1 ORDER BY a", c);
  EXPECT_EQ(p.clause_counts, (Counts{{"select", 1}, {"group_by", 1}, {"having", 1}, {"order_by", 1}}));
  EXPECT_EQ(p.function_counts, (Counts{{"count", 2}}));
  EXPECT_EQ(p.referenced_columns, (Counts{{"t.a", 3}}));
  EXPECT_EQ(p.operator_counts, (Counts{{"comparison", 1}}));
  EXPECT_EQ(p.clause_total(), 4u);
  EXPECT_EQ(p.function_total(), 2u);
  EXPECT_EQ(p.operator_total(), 1u);
}

TEST(Coverage, ProfileErrorsAndJson) {
  const auto c = testing::tpch_catalog();
  EXPECT_THROW(profile_query("SELECT FROM", c), SyntaxError);
  EXPECT_THROW(profile_query("SELECT nope FROM nation", c), UnknownObjectError);
  const auto p = profile_query("SELECT n_name, COUNT(*) FROM nation, region WHERE n_regionkey = r_regionkey "
                               "AND r_name LIKE 'A%' GROUP BY n_name",
                               c);
  EXPECT_EQ(complexity_profile_from_json(nlohmann::json::parse(to_json(p).dump())), p);
}

ComplexityProfile synthetic(std::uint64_t joins, std::uint64_t clauses, const std::string& table,
                            const std::string& column, bool group_by) {
  ComplexityProfile p;
  p.join_count = joins;
  p.clause_counts["select"] = clauses;
  if (group_by) p.clause_counts["group_by"] = 1;
  p.referenced_tables[table] = 2;
  p.referenced_columns[column] = 1;
  return p;
}

TEST(Coverage, AggregateByHand) {
  const auto c = ingest_ddl("CREATE TABLE a (x INT, y INT); CREATE TABLE b (z INT);");
  const std::vector<ComplexityProfile> ps = {synthetic(0, 1, "a", "a.x", false), synthetic(2, 1, "a", "a.x", true),
                                             synthetic(4, 2, "a", "a.y", false), synthetic(2, 1, "a", "a.x", false)};
  CoverageTargets targets;
  targets.table_min_fraction = 0.5;
  targets.column_min_fraction = 0.3;
  targets.clause_min_fraction = {{"group_by", 0.5}, {"order_by", 0.0}};
  const auto r = aggregate_coverage(ps, "mechanical", c, targets);
  EXPECT_EQ(r.query_count, 4u);
  // joins 0,2,4,2: mean 2, population variance (4+0+4+0)/4 = 2.
  EXPECT_DOUBLE_EQ(r.facets.at("joins").mean, 2.0);
  EXPECT_DOUBLE_EQ(r.facets.at("joins").std, std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(r.facets.at("joins").min, 0.0);
  EXPECT_DOUBLE_EQ(r.facets.at("joins").max, 4.0);
  // clauses 1,2,2,1
  EXPECT_DOUBLE_EQ(r.facets.at("clauses").mean, 1.5);
  EXPECT_DOUBLE_EQ(r.facets.at("clauses").std, 0.5);
  EXPECT_DOUBLE_EQ(r.facets.at("operators").max, 0.0);

  EXPECT_EQ(r.table_refs.at("a").occurrences, 8u);
  EXPECT_DOUBLE_EQ(r.table_refs.at("a").share, 1.0);
  EXPECT_DOUBLE_EQ(r.table_refs.at("b").query_fraction, 0.0);
  EXPECT_DOUBLE_EQ(r.column_refs.at("a.x").share, 0.75);
  EXPECT_DOUBLE_EQ(r.column_refs.at("a.y").query_fraction, 0.25);
  EXPECT_EQ(r.column_refs.count("b.z"), 1u);
  EXPECT_DOUBLE_EQ(r.clause_presence.at("group_by"), 0.25);
  EXPECT_DOUBLE_EQ(r.clause_presence.at("having"), 0.0);

  // b under-used; a.y and b.z unused; group_by short. order_by target is met.
  ASSERT_EQ(r.gaps.size(), 4u);
  EXPECT_EQ(r.gaps[0].kind, GapKind::kTableUnderused);
  EXPECT_EQ(r.gaps[0].subject, "b");
  EXPECT_EQ(r.gaps[1].subject, "a.y");
  EXPECT_EQ(r.gaps[2].subject, "b.z");
  EXPECT_EQ(r.gaps[3].kind, GapKind::kOperationUnderused);
  EXPECT_EQ(r.gaps[3].subject, "group_by");
  EXPECT_DOUBLE_EQ(r.gaps[3].observed_freq, 0.25);

  EXPECT_THROW(aggregate_coverage({}, "x", c), EmptyInputError);
  const auto j = to_json(r);
  EXPECT_EQ(j.at("facets").size(), 4u);
  EXPECT_EQ(facets_csv({r}).substr(0, facets_csv({r}).find('\n')), "setting,facet,mean,std,min,max");
  EXPECT_NE(clause_presence_csv({r}).find("mechanical,group_by,0.25"), std::string::npos);
}

TEST(Coverage, PlanRegeneration) {
  const auto c = testing::tpch_catalog();
  const auto subs = enumerate_subschemas(build_join_graph(c));
  CoverageReport r;
  r.gaps = {{GapKind::kTableUnderused, "region", 0, 0.1},
            {GapKind::kTableUnderused, "nation", 0.05, 0.1},
            {GapKind::kColumnUnused, "part.p_comment", 0, 0.01},
            {GapKind::kOperationUnderused, "order_by", 0.05, 0.1},
            {GapKind::kOperationUnderused, "having", 0.0, 0.1}};
  const auto d = plan_regeneration(r, subs, c);
  EXPECT_EQ(d.bias_override, "group_by");
  ASSERT_EQ(d.subschema_weights.size(), subs.size());
  for (const auto& s : subs) {
    double expect = 1;
    for (const auto& t : s.tables) expect += (t == "region" || t == "nation") ? 1 : 0;
    EXPECT_DOUBLE_EQ(d.subschema_weights.at(s.id), expect);
  }
  // Unused column plus the key and join columns of its table.
  EXPECT_EQ(d.column_filters.at("part"), (std::set<std::string>{"p_comment", "p_partkey"}));
  EXPECT_TRUE(plan_regeneration(CoverageReport{}, subs, c).empty());
}

}  // namespace
}  // namespace querygen
