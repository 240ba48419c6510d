#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "querygen/catalog.h"
#include "querygen/subschema.h"

namespace querygen {

struct QueryRecord;

struct MechConfig {
  std::uint64_t seed = 0;
  double p_where = 0.7;
  double p_group_by = 0.3;
  double p_order_by = 0.3;
  double p_having = 0.3;  // conditional on GROUP BY being chosen
  int max_predicates = 3;
  std::vector<std::string> aggregate_functions = {"COUNT", "SUM", "AVG", "MIN", "MAX"};
  double p_aggregate = 0.5;
  std::pair<int, int> projection_count_range = {1, 4};

  // Throws ConfigError.
  void validate() const;
};

nlohmann::ordered_json to_json(const MechConfig& c);

// Queries over all tables of `subschema`, joined along its spanning joins.
// The stream seed is derive_seed(config.seed, subschema.id). Throws
// UnknownObjectError when the subschema does not match the catalog.
std::vector<std::string> generate_mechanical_sql(const Subschema& subschema,
                                                 const SchemaCatalog& catalog,
                                                 const MechConfig& config, std::size_t n);

// Same queries wrapped as records with origin "mechanical".
std::vector<QueryRecord> generate_mechanical(const Subschema& subschema,
                                             const SchemaCatalog& catalog,
                                             const MechConfig& config, std::size_t n,
                                             int batch = 0);

struct SeedExample {
  std::string id;  // record id of the source query
  std::string sql;
  std::set<std::string> features;

  friend bool operator==(const SeedExample&, const SeedExample&) = default;
};

// Clause tags present at the top level of a query: where, group_by, having,
// order_by, limit, join, aggregate. Empty for unparsable text.
std::set<std::string> clause_features(std::string_view sql);

// k examples without replacement. With a bias tag, each draw comes from the
// tagged part of the remaining pool with probability bias_weight and from
// the untagged part otherwise; an exhausted part falls back to the whole
// remaining pool. Throws InsufficientPoolError when k exceeds the pool.
std::vector<SeedExample> select_seed_examples(const std::vector<QueryRecord>& pool, std::size_t k,
                                              const std::optional<std::string>& bias,
                                              double bias_weight, std::uint64_t rng_seed);

}  // namespace querygen
