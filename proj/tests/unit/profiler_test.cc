#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "querygen/error.h"
#include "querygen/schema.h"
#include "querygen/tpch_data.h"
#include "support.h"

namespace querygen {
namespace {

class MapSampler : public ValueSampler {
 public:
  std::map<std::string, std::vector<std::string>> data;
  std::vector<std::string> sample(const std::string& table, const std::string& column,
                                  std::size_t limit) override {
    auto it = data.find(table + "." + column);
    if (it == data.end()) throw LoadError("no data for " + table + "." + column);
    auto v = it->second;
    if (v.size() > limit) v.resize(limit);
    return v;
  }
};

SchemaCatalog small_catalog() {
  return ingest_ddl(
      "CREATE TABLE r (id INT PRIMARY KEY, version VARCHAR(20), flag CHAR(1), score DECIMAL(5,2), "
      "note VARCHAR(40));");
}

TEST(Profiler, LooksLikeLabel) {
  EXPECT_TRUE(looks_like_label("1.2"));
  EXPECT_TRUE(looks_like_label("10.0.3"));
  EXPECT_FALSE(looks_like_label("1"));
  EXPECT_FALSE(looks_like_label("1."));
  EXPECT_FALSE(looks_like_label(".1"));
  EXPECT_FALSE(looks_like_label("v1.2"));
  EXPECT_FALSE(looks_like_label(""));
}

TEST(Profiler, MetadataFromSamples) {
  MapSampler s;
  s.data["r.id"] = {"1", "2", "10", "3"};
  s.data["r.version"] = {"1.0", "1.1", "2.0.1", "beta", "1.0", "1.2", "1.3", "1.4", "1.5", "1.6"};
  s.data["r.flag"] = {"B", "A", "A", "C"};
  s.data["r.score"] = {"9.5", "10.25", "-1.00"};
  s.data["r.note"] = {};
  const auto base = small_catalog();
  const auto c = profile_columns(base, s);

  const auto& id = c.find_column("r", "id")->metadata;
  EXPECT_EQ(id.distinct_value_count, 4u);
  EXPECT_EQ(id.value_range, std::make_pair(std::string("1"), std::string("10")));
  EXPECT_EQ(*id.enumerated_values, (std::vector<std::string>{"1", "2", "3", "10"}));
  EXPECT_FALSE(id.is_label);

  // 9 of 10 values are version-like, exactly the default 0.9 fraction.
  EXPECT_TRUE(c.find_column("r", "version")->metadata.is_label);

  const auto& flag = c.find_column("r", "flag")->metadata;
  EXPECT_EQ(*flag.enumerated_values, (std::vector<std::string>{"A", "B", "C"}));
  EXPECT_EQ(flag.sample_values, (std::vector<std::string>{"B", "A", "C"}));

  EXPECT_EQ(c.find_column("r", "score")->metadata.value_range,
            std::make_pair(std::string("-1.00"), std::string("10.25")));

  const auto& note = c.find_column("r", "note")->metadata;
  EXPECT_EQ(note.distinct_value_count, 0u);
  EXPECT_FALSE(note.enumerated_values.has_value());
  EXPECT_FALSE(note.value_range.has_value());

  // Structure is untouched.
  auto stripped = c;
  for (auto& t : stripped.tables)
    for (auto& col : t.columns) col.metadata = {};
  EXPECT_EQ(stripped, base);
}

TEST(Profiler, EnumerationThresholdAndLabelOverride) {
  MapSampler s;
  for (int i = 0; i < 30; ++i) s.data["r.flag"].push_back(std::to_string(i));
  s.data["r.id"] = {"1"};
  s.data["r.version"] = {"x"};
  s.data["r.score"] = {"1"};
  s.data["r.note"] = {"a"};
  ProfileOptions o;
  o.enumeration_threshold = 29;
  o.label_columns = {"r.note"};
  o.sample_limit = 29;
  auto c = profile_columns(small_catalog(), s, o);
  EXPECT_EQ(c.find_column("r", "flag")->metadata.distinct_value_count, 29u);
  EXPECT_TRUE(c.find_column("r", "flag")->metadata.enumerated_values.has_value());
  EXPECT_TRUE(c.find_column("r", "note")->metadata.is_label);
  EXPECT_FALSE(c.find_column("r", "version")->metadata.is_label);
  o.sample_limit = 30;
  c = profile_columns(small_catalog(), s, o);
  EXPECT_FALSE(c.find_column("r", "flag")->metadata.enumerated_values.has_value());
}

TEST(Profiler, SamplerFailureLeavesColumnAndAddsAdvisory) {
  MapSampler s;
  s.data["r.id"] = {"1"};
  const auto c = profile_columns(small_catalog(), s);
  EXPECT_EQ(c.find_column("r", "id")->metadata.distinct_value_count, 1u);
  EXPECT_TRUE(c.find_column("r", "version")->metadata.empty());
  EXPECT_EQ(c.advisories.size(), 4u);
}

TEST(Profiler, DelimitedFilesTblAndCsv) {
  testing::TempDir dir;
  TpchSynthOptions o;
  o.orders = 200;
  o.parts = 50;
  o.suppliers = 8;
  o.customers = 30;
  const auto counts = write_tpch_tbl(dir.path().string(), o);
  EXPECT_EQ(counts.at("region"), 5u);
  EXPECT_EQ(counts.at("nation"), 25u);
  EXPECT_EQ(counts.at("partsupp"), 200u);
  EXPECT_EQ(counts.at("orders"), 200u);

  const auto catalog = testing::tpch_catalog();
  DelimitedFileSampler sampler(dir.path().string(), catalog);
  const auto c = profile_columns(catalog, sampler);
  EXPECT_EQ(*c.find_column("lineitem", "l_returnflag")->metadata.enumerated_values,
            (std::vector<std::string>{"A", "N", "R"}));
  EXPECT_EQ(*c.find_column("lineitem", "l_linestatus")->metadata.enumerated_values,
            (std::vector<std::string>{"F", "O"}));
  EXPECT_EQ(c.find_column("region", "r_name")->metadata.enumerated_values->size(), 5u);
  const auto& dates = c.find_column("orders", "o_orderdate")->metadata.value_range;
  ASSERT_TRUE(dates.has_value());
  EXPECT_GE(dates->first, "1992-01-01");
  EXPECT_LE(dates->second, "1998-08-02");
  EXPECT_TRUE(c.advisories.empty());

  const auto v = ingest_ddl("CREATE TABLE kv (k INT, v VARCHAR(10));");
  std::ofstream(dir.file("kv.csv")) << "V,K\n\"a,b\",1\nc,2\n";
  DelimitedFileSampler csv(dir.path().string(), v);
  EXPECT_EQ(csv.sample("kv", "v", 10), (std::vector<std::string>{"a,b", "c"}));
  EXPECT_EQ(csv.sample("kv", "k", 1), (std::vector<std::string>{"1"}));
  EXPECT_THROW(csv.sample("kv", "nope", 1), UnknownObjectError);
  EXPECT_THROW(DelimitedFileSampler(dir.file("missing"), v).sample("kv", "k", 1), LoadError);
}

TEST(TpchData, DeterministicAndConsistentKeys) {
  testing::TempDir a, b;
  TpchSynthOptions o;
  o.orders = 64;
  o.parts = 20;
  o.suppliers = 4;
  o.customers = 10;
  write_tpch_tbl(a.path().string(), o);
  write_tpch_tbl(b.path().string(), o);
  for (const char* t : {"region", "nation", "part", "supplier", "partsupp", "customer", "orders", "lineitem"})
    EXPECT_EQ(testing::read_file(a.file(std::string(t) + ".tbl")),
              testing::read_file(b.file(std::string(t) + ".tbl")))
        << t;
  // partsupp keys are unique and every lineitem (part, supplier) pair exists.
  for (std::uint64_t suppliers : {4, 5, 7, 12, 100}) {
    testing::TempDir d;
    o.suppliers = suppliers;
    o.parts = 300;
    write_tpch_tbl(d.path().string(), o);
    std::set<std::pair<std::string, std::string>> ps;
    std::istringstream in(testing::read_file(d.file("partsupp.tbl")));
    for (std::string line; std::getline(in, line);) {
      const auto a = line.find('|'), b = line.find('|', a + 1);
      ASSERT_TRUE(ps.emplace(line.substr(0, a), line.substr(a + 1, b - a - 1)).second) << suppliers << ": " << line;
    }
    EXPECT_EQ(ps.size(), 1200u);
    std::istringstream li(testing::read_file(d.file("lineitem.tbl")));
    for (std::string line; std::getline(li, line);) {
      const auto a = line.find('|'), b = line.find('|', a + 1), c = line.find('|', b + 1);
      ASSERT_TRUE(ps.count({line.substr(a + 1, b - a - 1), line.substr(b + 1, c - b - 1)})) << line;
    }
  }
  o.suppliers = 3;
  EXPECT_THROW(write_tpch_tbl(a.path().string(), o), ConfigError);
}

}  // namespace
}  // namespace querygen
