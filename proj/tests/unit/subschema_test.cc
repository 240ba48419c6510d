#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.h"
#include "querygen/error.h"
#include "querygen/hash.h"
#include "querygen/subschema.h"
#include "support.h"

namespace querygen {
namespace {

std::set<std::uint64_t> as_set(const std::vector<std::uint64_t>& v) { return {v.begin(), v.end()}; }

TEST(JoinGraph, TpchEdges) {
  const auto c = testing::tpch_catalog();
  const auto all = build_join_graph(c);
  EXPECT_EQ(all.nodes.size(), 8u);
  // lineitem-partsupp, lineitem-orders, lineitem-part, lineitem-supplier,
  // partsupp-part, partsupp-supplier, orders-customer, customer-nation,
  // supplier-nation, nation-region.
  EXPECT_EQ(all.edges.size(), 10u);
  EXPECT_EQ(build_join_graph(c, FkProvenance::kDeclared).edges.size(), 8u);
  const auto inferred = build_join_graph(c, FkProvenance::kInferred);
  EXPECT_EQ(inferred.edges.size(), 2u);
  for (const auto& e : all.edges) {
    EXPECT_LT(e.a, e.b);
    EXPECT_TRUE(std::is_sorted(e.fks.begin(), e.fks.end(), [](const ForeignKey& x, const ForeignKey& y) {
      return x.provenance < y.provenance;
    }));
  }
  const auto li = *all.index_of("lineitem");
  const auto part = *all.index_of("part");
  ASSERT_NE(all.find_edge(part, li), nullptr);
  EXPECT_EQ(all.find_edge(part, li)->fks.front().provenance, FkProvenance::kInferred);
  EXPECT_FALSE(all.index_of("nope").has_value());
  EXPECT_EQ(__builtin_popcountll(all.adjacency()[li]), 4);
}

TEST(Subschema, TpchCountsPerEdgeSet) {
  const auto c = testing::tpch_catalog();
  auto count = [&](const JoinGraph& g, std::size_t min) {
    EnumerateOptions o;
    o.min_tables = min;
    return enumerate_subschemas(g, o).size();
  };
  const auto declared = build_join_graph(c, FkProvenance::kDeclared);
  const auto inferred = build_join_graph(c, FkProvenance::kInferred);
  const auto all = build_join_graph(c);
  EXPECT_EQ(count(declared, 1), 73u);
  EXPECT_EQ(count(declared, 2), 65u);
  EXPECT_EQ(count(inferred, 1), 11u);
  EXPECT_EQ(count(inferred, 2), 3u);
  EXPECT_EQ(count(all, 1), 98u);
  EXPECT_EQ(count(all, 2), 90u);
}

TEST(Subschema, MatchesBruteForceOnRandomGraphs) {
  Rng rng(3);
  for (int trial = 0; trial < 150; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 11));
    const auto c = oracle::random_graph_catalog(rng, n, rng.uniform_real(0.05, 0.6));
    const auto g = build_join_graph(c);
    EnumerateOptions o;
    o.min_tables = static_cast<std::size_t>(rng.uniform_int(1, 3));
    if (rng.bernoulli(0.5)) o.max_tables = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(n)));
    const auto got = connected_subsets(g, o);
    const auto expect = oracle::connected_subsets(n, oracle::edge_pairs(c, true, true), o.min_tables,
                                                  o.max_tables.value_or(n));
    ASSERT_EQ(got.size(), as_set(got).size()) << "duplicates";
    ASSERT_EQ(as_set(got), expect) << "trial " << trial;
  }
}

TEST(Subschema, OrderingIdsAndSpanningJoins) {
  const auto c = testing::tpch_catalog();
  const auto g = build_join_graph(c);
  const auto list = enumerate_subschemas(g);
  for (std::size_t i = 1; i < list.size(); ++i) {
    const auto& p = list[i - 1].tables;
    const auto& q = list[i].tables;
    ASSERT_TRUE(p.size() < q.size() || (p.size() == q.size() && p < q));
  }
  for (const auto& s : list) {
    ASSERT_TRUE(std::is_sorted(s.tables.begin(), s.tables.end()));
    ASSERT_EQ(s.spanning_joins.size(), s.tables.size() - 1);
    std::string joined;
    for (const auto& t : s.tables) joined += (joined.empty() ? "" : ",") + t;
    ASSERT_EQ(s.id, stable_hash(joined));
    ASSERT_EQ(s.id, subschema_id(s.tables));
    const std::set<std::string> members(s.tables.begin(), s.tables.end());
    for (const auto& fk : s.spanning_joins) {
      ASSERT_TRUE(members.count(fk.from_table));
      ASSERT_TRUE(members.count(fk.to_table));
    }
    ASSERT_TRUE(is_connected(g, members));
  }
  EXPECT_EQ(list.front().tables, (std::vector<std::string>{"customer"}));
  EXPECT_EQ(list.back().tables.size(), 8u);
}

TEST(Subschema, SpanningJoinChoice) {
  const auto c = testing::tpch_catalog();
  const auto g = build_join_graph(c);
  // Declared composite key beats nothing; the part edge is inferred only.
  const auto j = choose_spanning_joins(g, {"lineitem", "part"});
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0].provenance, FkProvenance::kInferred);
  EXPECT_THROW(choose_spanning_joins(g, {"region", "part"}), NotConnectedError);
  EXPECT_THROW(choose_spanning_joins(g, {"region", "nope"}), UnknownObjectError);
  EXPECT_TRUE(choose_spanning_joins(g, {"region"}).empty());
  // A triangle yields two joins, chosen by table-name order.
  const auto t = choose_spanning_joins(g, {"lineitem", "part", "partsupp"});
  ASSERT_EQ(t.size(), 2u);
  for (const auto& fk : t) EXPECT_TRUE(fk.from_table == "lineitem" || fk.from_table == "partsupp");
}

TEST(Subschema, SizeBoundsAndSafetyLimit) {
  const auto g = build_join_graph(testing::tpch_catalog());
  EnumerateOptions o;
  o.min_tables = 3;
  o.max_tables = 3;
  for (const auto& s : enumerate_subschemas(g, o)) EXPECT_EQ(s.tables.size(), 3u);
  o.min_tables = 9;
  o.max_tables.reset();
  EXPECT_TRUE(enumerate_subschemas(g, o).empty());
  o = {};
  o.safety_limit = 7;
  EXPECT_THROW(enumerate_subschemas(g, o), GraphTooLargeError);
}

TEST(Subschema, JsonlRoundTrip) {
  const auto list = enumerate_subschemas(build_join_graph(testing::tpch_catalog()));
  testing::TempDir dir;
  write_subschemas(list, dir.file("s.jsonl"));
  EXPECT_EQ(read_subschemas(dir.file("s.jsonl")), list);
  const auto text = testing::read_file(dir.file("s.jsonl"));
  EXPECT_EQ(text.substr(0, text.find('\n')), R"({"schema_version":1,"kind":"subschemas"})");
  EXPECT_EQ(subschema_from_json(nlohmann::json::parse(to_json(list[40]).dump())), list[40]);
}

}  // namespace
}  // namespace querygen
