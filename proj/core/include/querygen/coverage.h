#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "querygen/catalog.h"
#include "querygen/schema.h"
#include "querygen/subschema.h"

namespace querygen {

// Structural counts of one query.
//
// join_count        JOIN nodes, plus k-1 for every FROM list of k items
// clause_counts     select / where / group_by / order_by / having / limit,
//                   once per occurrence at any nesting level; window
//                   ORDER BY is not a clause
// operator_counts   and / or / not / comparison / in / between / like;
//                   NOT IN, NOT BETWEEN, NOT LIKE and NOT EXISTS also add
//                   one "not"; IS [NOT] NULL is not an operator
// function_counts   lower-case function name; CAST and EXTRACT included
// subselect_count   SELECT nodes minus one
// referenced_*      one entry per resolved base table / column reference,
//                   columns keyed "table.column"
struct ComplexityProfile {
  std::uint64_t join_count = 0;
  std::map<std::string, std::uint64_t> clause_counts;
  std::map<std::string, std::uint64_t> operator_counts;
  std::map<std::string, std::uint64_t> function_counts;
  std::uint64_t subselect_count = 0;
  std::map<std::string, std::uint64_t> referenced_tables;
  std::map<std::string, std::uint64_t> referenced_columns;

  std::uint64_t clause_total() const;
  std::uint64_t operator_total() const;
  std::uint64_t function_total() const;
  bool has_clause(const std::string& clause) const {
    auto it = clause_counts.find(clause);
    return it != clause_counts.end() && it->second > 0;
  }

  friend bool operator==(const ComplexityProfile&, const ComplexityProfile&) = default;
};

nlohmann::ordered_json to_json(const ComplexityProfile& p);
ComplexityProfile complexity_profile_from_json(const nlohmann::json& j);

// Throws SyntaxError for unparsable text and UnknownObjectError when an
// identifier does not resolve.
ComplexityProfile profile_query(std::string_view sql, const SchemaCatalog& catalog);

struct FacetStats {
  double mean = 0;
  double std = 0;  // population
  double min = 0;
  double max = 0;
};

struct RefStat {
  std::uint64_t occurrences = 0;
  std::uint64_t queries = 0;    // queries referencing the object at least once
  double share = 0;             // occurrences / all occurrences of this kind
  double query_fraction = 0;    // queries / corpus size
};

enum class GapKind { kTableUnderused, kColumnUnused, kOperationUnderused };
std::string_view to_string(GapKind kind);

struct CoverageGap {
  GapKind kind;
  std::string subject;
  double observed_freq = 0;
  double target_freq = 0;
};

struct CoverageTargets {
  double table_min_fraction = 0.02;
  // A column below this query fraction is reported as unused; 0 disables.
  double column_min_fraction = 0.01;
  std::map<std::string, double> clause_min_fraction = {
      {"group_by", 0.10}, {"having", 0.10}, {"order_by", 0.10}};
};

inline const std::vector<std::string> kFacets = {"joins", "clauses", "operators", "functions"};
inline const std::vector<std::string> kPresenceClauses = {"group_by", "order_by", "having"};

struct CoverageReport {
  std::string setting;
  std::uint64_t query_count = 0;
  std::map<std::string, FacetStats> facets;
  std::map<std::string, RefStat> table_refs;   // every catalog table
  std::map<std::string, RefStat> column_refs;  // every catalog column
  std::map<std::string, double> clause_presence;
  std::vector<CoverageGap> gaps;
};

// Throws EmptyInputError when `profiles` is empty.
CoverageReport aggregate_coverage(const std::vector<ComplexityProfile>& profiles,
                                  const std::string& setting, const SchemaCatalog& catalog,
                                  const CoverageTargets& targets = {});

nlohmann::ordered_json to_json(const CoverageReport& report);

// setting,facet,mean,std,min,max rows for a set of reports.
std::string facets_csv(const std::vector<CoverageReport>& reports);
// setting,clause,fraction rows.
std::string clause_presence_csv(const std::vector<CoverageReport>& reports);

struct RegenDirectives {
  std::map<std::string, double> subschema_weights;
  ColumnFilter column_filters;
  std::optional<std::string> bias_override;  // "group_by" | "order_by"

  bool empty() const {
    return subschema_weights.empty() && column_filters.empty() && !bias_override;
  }
};

nlohmann::ordered_json to_json(const RegenDirectives& d);

// Weight of a subschema = 1 + number of under-used tables it contains.
// Column filters keep the unused columns plus key columns of each table that
// has unused columns. The clause with the largest shortfall sets the bias
// (a HAVING gap maps to group_by).
RegenDirectives plan_regeneration(const CoverageReport& report,
                                  const std::vector<Subschema>& subschemas,
                                  const SchemaCatalog& catalog);

}  // namespace querygen
