#include <algorithm>

#include "querygen/error.h"
#include "querygen/mech_generator.h"
#include "querygen/random.h"
#include "querygen/record.h"
#include "querygen/sql/parser.h"
#include "querygen/sql/walk.h"

namespace querygen {

namespace {

const std::set<std::string> kAggregateNames = {"count", "sum", "avg", "min", "max"};

class FeatureCollector : public sql::Visitor {
 public:
  void on_query(const sql::Query& q) override {
    if (!q.order_by.empty()) features.insert("order_by");
    if (q.limit) features.insert("limit");
  }
  void on_select(const sql::Select& s) override {
    if (s.where) features.insert("where");
    if (!s.group_by.empty()) features.insert("group_by");
    if (s.having) features.insert("having");
    if (!s.order_by.empty()) features.insert("order_by");
    if (s.limit) features.insert("limit");
    if (s.from.size() > 1) features.insert("join");
  }
  void on_table_ref(const sql::TableRef& r) override {
    if (r.kind == sql::TableRefKind::kJoin) features.insert("join");
  }
  void on_expr(const sql::Expr& e) override {
    if (e.kind == sql::ExprKind::kFunction && kAggregateNames.count(e.op) && !e.over)
      features.insert("aggregate");
  }

  std::set<std::string> features;
};

}  // namespace

std::set<std::string> clause_features(std::string_view sql) {
  try {
    const auto q = sql::parse_query(sql);
    FeatureCollector c;
    sql::walk(*q, c);
    return c.features;
  } catch (const SyntaxError&) {
    return {};
  }
}

std::vector<SeedExample> select_seed_examples(const std::vector<QueryRecord>& pool, std::size_t k,
                                              const std::optional<std::string>& bias,
                                              double bias_weight, std::uint64_t rng_seed) {
  if (k > pool.size())
    throw InsufficientPoolError("requested " + std::to_string(k) + " examples from a pool of " +
                                std::to_string(pool.size()));
  if (k == 0) return {};

  std::vector<SeedExample> candidates;
  candidates.reserve(pool.size());
  for (const auto& r : pool) candidates.push_back({r.id, r.sql, clause_features(r.sql)});

  Rng rng(rng_seed);
  std::vector<std::size_t> remaining(candidates.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;

  std::vector<SeedExample> out;
  for (std::size_t draw = 0; draw < k; ++draw) {
    std::vector<std::size_t> source = remaining;
    if (bias) {
      const bool want_tagged = rng.bernoulli(bias_weight);
      std::vector<std::size_t> part;
      for (auto i : remaining)
        if ((candidates[i].features.count(*bias) > 0) == want_tagged) part.push_back(i);
      if (!part.empty()) source = std::move(part);
    }
    const std::size_t chosen = source[static_cast<std::size_t>(rng.uniform(source.size()))];
    out.push_back(candidates[chosen]);
    remaining.erase(std::find(remaining.begin(), remaining.end(), chosen));
  }
  return out;
}

}  // namespace querygen
