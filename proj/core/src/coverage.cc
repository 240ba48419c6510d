#include "querygen/coverage.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "querygen/error.h"
#include "querygen/sql/analyzer.h"
#include "querygen/sql/parser.h"
#include "querygen/sql/walk.h"

namespace querygen {

namespace {

std::uint64_t sum_values(const std::map<std::string, std::uint64_t>& m) {
  std::uint64_t total = 0;
  for (const auto& [k, v] : m) total += v;
  return total;
}

bool is_comparison(const std::string& op) {
  return op == "=" || op == "<>" || op == "<" || op == "<=" || op == ">" || op == ">=";
}

class Counter : public sql::Visitor {
 public:
  explicit Counter(ComplexityProfile& p) : p_(p) {}

  void on_query(const sql::Query& q) override {
    if (!q.order_by.empty()) ++p_.clause_counts["order_by"];
    if (q.limit) ++p_.clause_counts["limit"];
  }

  void on_select(const sql::Select& s) override {
    ++selects;
    ++p_.clause_counts["select"];
    if (s.where) ++p_.clause_counts["where"];
    if (!s.group_by.empty()) ++p_.clause_counts["group_by"];
    if (s.having) ++p_.clause_counts["having"];
    if (!s.order_by.empty()) ++p_.clause_counts["order_by"];
    if (s.limit) ++p_.clause_counts["limit"];
    if (s.from.size() > 1) p_.join_count += s.from.size() - 1;
  }

  void on_table_ref(const sql::TableRef& r) override {
    if (r.kind == sql::TableRefKind::kJoin) ++p_.join_count;
  }

  void on_expr(const sql::Expr& e) override {
    using sql::ExprKind;
    switch (e.kind) {
      case ExprKind::kBinary:
        if (e.op == "and" || e.op == "or") ++p_.operator_counts[e.op];
        else if (is_comparison(e.op)) ++p_.operator_counts["comparison"];
        break;
      case ExprKind::kUnary:
        if (e.op == "not") ++p_.operator_counts["not"];
        break;
      case ExprKind::kIn:
        ++p_.operator_counts["in"];
        if (e.negated) ++p_.operator_counts["not"];
        break;
      case ExprKind::kBetween:
        ++p_.operator_counts["between"];
        if (e.negated) ++p_.operator_counts["not"];
        break;
      case ExprKind::kLike:
        ++p_.operator_counts["like"];
        if (e.negated) ++p_.operator_counts["not"];
        break;
      case ExprKind::kExists:
        if (e.negated) ++p_.operator_counts["not"];
        break;
      case ExprKind::kFunction:
        if (e.op != "row") ++p_.function_counts[e.op];
        break;
      case ExprKind::kCast:
        ++p_.function_counts["cast"];
        break;
      default:
        break;
    }
  }

  std::uint64_t selects = 0;

 private:
  ComplexityProfile& p_;
};

nlohmann::ordered_json counts_json(const std::map<std::string, std::uint64_t>& m) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

std::map<std::string, std::uint64_t> counts_from_json(const nlohmann::json& j) {
  std::map<std::string, std::uint64_t> m;
  for (auto it = j.begin(); it != j.end(); ++it) m[it.key()] = it.value().get<std::uint64_t>();
  return m;
}

FacetStats facet(const std::vector<double>& xs) {
  FacetStats s;
  const double n = static_cast<double>(xs.size());
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double var = 0;
  for (double x : xs) var += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(var / n);
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  // Guard min <= mean <= max against rounding in the mean.
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::uint64_t ComplexityProfile::clause_total() const { return sum_values(clause_counts); }
std::uint64_t ComplexityProfile::operator_total() const { return sum_values(operator_counts); }
std::uint64_t ComplexityProfile::function_total() const { return sum_values(function_counts); }

nlohmann::ordered_json to_json(const ComplexityProfile& p) {
  nlohmann::ordered_json j;
  j["join_count"] = p.join_count;
  j["clause_counts"] = counts_json(p.clause_counts);
  j["operator_counts"] = counts_json(p.operator_counts);
  j["function_counts"] = counts_json(p.function_counts);
  j["subselect_count"] = p.subselect_count;
  j["referenced_tables"] = counts_json(p.referenced_tables);
  j["referenced_columns"] = counts_json(p.referenced_columns);
  return j;
}

ComplexityProfile complexity_profile_from_json(const nlohmann::json& j) {
  ComplexityProfile p;
  p.join_count = j.value("join_count", std::uint64_t{0});
  p.clause_counts = counts_from_json(j.value("clause_counts", nlohmann::json::object()));
  p.operator_counts = counts_from_json(j.value("operator_counts", nlohmann::json::object()));
  p.function_counts = counts_from_json(j.value("function_counts", nlohmann::json::object()));
  p.subselect_count = j.value("subselect_count", std::uint64_t{0});
  p.referenced_tables = counts_from_json(j.value("referenced_tables", nlohmann::json::object()));
  p.referenced_columns = counts_from_json(j.value("referenced_columns", nlohmann::json::object()));
  return p;
}

ComplexityProfile profile_query(std::string_view sql, const SchemaCatalog& catalog) {
  const auto query = sql::parse_query(sql);
  const auto analysis = sql::analyze(*query, catalog);
  if (!analysis.issues.empty())
    throw UnknownObjectError("cannot resolve '" + analysis.issues.front().subject + "'");

  ComplexityProfile p;
  Counter counter(p);
  sql::walk(*query, counter);
  p.subselect_count = counter.selects > 0 ? counter.selects - 1 : 0;
  for (const auto& t : analysis.table_uses) ++p.referenced_tables[t];
  for (const auto& c : analysis.column_uses) ++p.referenced_columns[c.table + "." + c.column];
  return p;
}

std::string_view to_string(GapKind kind) {
  switch (kind) {
    case GapKind::kTableUnderused: return "table_underused";
    case GapKind::kColumnUnused: return "column_unused";
    case GapKind::kOperationUnderused: return "operation_underused";
  }
  return "table_underused";
}

CoverageReport aggregate_coverage(const std::vector<ComplexityProfile>& profiles,
                                  const std::string& setting, const SchemaCatalog& catalog,
                                  const CoverageTargets& targets) {
  if (profiles.empty()) throw EmptyInputError("no profiles to aggregate for '" + setting + "'");
  CoverageReport r;
  r.setting = setting;
  r.query_count = profiles.size();
  const double n = static_cast<double>(profiles.size());

  std::vector<double> joins, clauses, ops, funcs;
  for (const auto& p : profiles) {
    joins.push_back(static_cast<double>(p.join_count));
    clauses.push_back(static_cast<double>(p.clause_total()));
    ops.push_back(static_cast<double>(p.operator_total()));
    funcs.push_back(static_cast<double>(p.function_total()));
  }
  r.facets["joins"] = facet(joins);
  r.facets["clauses"] = facet(clauses);
  r.facets["operators"] = facet(ops);
  r.facets["functions"] = facet(funcs);

  for (const auto& t : catalog.tables) {
    r.table_refs[t.name] = {};
    for (const auto& c : t.columns) r.column_refs[t.name + "." + c.name] = {};
  }
  std::uint64_t table_total = 0, column_total = 0;
  for (const auto& p : profiles) {
    for (const auto& [t, count] : p.referenced_tables) {
      auto& s = r.table_refs[t];
      s.occurrences += count;
      ++s.queries;
      table_total += count;
    }
    for (const auto& [c, count] : p.referenced_columns) {
      auto& s = r.column_refs[c];
      s.occurrences += count;
      ++s.queries;
      column_total += count;
    }
  }
  auto finish = [&](std::map<std::string, RefStat>& m, std::uint64_t total) {
    for (auto& [k, s] : m) {
      s.share = total ? static_cast<double>(s.occurrences) / static_cast<double>(total) : 0.0;
      s.query_fraction = static_cast<double>(s.queries) / n;
    }
  };
  finish(r.table_refs, table_total);
  finish(r.column_refs, column_total);

  for (const auto& clause : kPresenceClauses) {
    const auto present = std::count_if(profiles.begin(), profiles.end(),
                                       [&](const ComplexityProfile& p) { return p.has_clause(clause); });
    r.clause_presence[clause] = static_cast<double>(present) / n;
  }

  for (const auto& [t, s] : r.table_refs)
    if (s.query_fraction < targets.table_min_fraction)
      r.gaps.push_back({GapKind::kTableUnderused, t, s.query_fraction, targets.table_min_fraction});
  if (targets.column_min_fraction > 0)
    for (const auto& [c, s] : r.column_refs)
      if (s.query_fraction < targets.column_min_fraction)
        r.gaps.push_back({GapKind::kColumnUnused, c, s.query_fraction, targets.column_min_fraction});
  for (const auto& [clause, target] : targets.clause_min_fraction) {
    auto it = r.clause_presence.find(clause);
    const double observed = it == r.clause_presence.end() ? 0.0 : it->second;
    if (observed < target) r.gaps.push_back({GapKind::kOperationUnderused, clause, observed, target});
  }
  return r;
}

nlohmann::ordered_json to_json(const CoverageReport& report) {
  nlohmann::ordered_json j;
  j["setting"] = report.setting;
  j["query_count"] = report.query_count;
  nlohmann::ordered_json facets;
  for (const auto& name : kFacets) {
    const auto& f = report.facets.at(name);
    facets[name] = {{"mean", f.mean}, {"std", f.std}, {"min", f.min}, {"max", f.max}};
  }
  j["facets"] = std::move(facets);
  auto refs = [](const std::map<std::string, RefStat>& m) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& [k, s] : m)
      out[k] = {{"occurrences", s.occurrences},
                {"queries", s.queries},
                {"share", s.share},
                {"query_fraction", s.query_fraction}};
    return out;
  };
  j["table_reference_freq"] = refs(report.table_refs);
  j["column_reference_freq"] = refs(report.column_refs);
  nlohmann::ordered_json presence = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.clause_presence) presence[k] = v;
  j["clause_presence_freq"] = std::move(presence);
  auto gaps = nlohmann::ordered_json::array();
  for (const auto& g : report.gaps)
    gaps.push_back({{"kind", std::string(to_string(g.kind))},
                    {"subject", g.subject},
                    {"observed_freq", g.observed_freq},
                    {"target_freq", g.target_freq}});
  j["gaps"] = std::move(gaps);
  return j;
}

std::string facets_csv(const std::vector<CoverageReport>& reports) {
  std::string out = "setting,facet,mean,std,min,max\n";
  for (const auto& r : reports)
    for (const auto& name : kFacets) {
      const auto& f = r.facets.at(name);
      out += r.setting + "," + name + "," + format_double(f.mean) + "," + format_double(f.std) +
             "," + format_double(f.min) + "," + format_double(f.max) + "\n";
    }
  return out;
}

std::string clause_presence_csv(const std::vector<CoverageReport>& reports) {
  std::string out = "setting,clause,fraction\n";
  for (const auto& r : reports)
    for (const auto& clause : kPresenceClauses)
      out += r.setting + "," + clause + "," + format_double(r.clause_presence.at(clause)) + "\n";
  return out;
}

nlohmann::ordered_json to_json(const RegenDirectives& d) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json weights = nlohmann::ordered_json::object();
  for (const auto& [k, w] : d.subschema_weights) weights[k] = w;
  j["subschema_weights"] = std::move(weights);
  nlohmann::ordered_json filters = nlohmann::ordered_json::object();
  for (const auto& [t, cols] : d.column_filters) filters[t] = cols;
  j["column_filters"] = std::move(filters);
  j["bias_override"] = d.bias_override ? nlohmann::ordered_json(*d.bias_override) : nlohmann::ordered_json(nullptr);
  return j;
}

RegenDirectives plan_regeneration(const CoverageReport& report,
                                  const std::vector<Subschema>& subschemas,
                                  const SchemaCatalog& catalog) {
  RegenDirectives d;
  if (report.gaps.empty()) return d;

  std::set<std::string> gap_tables;
  double best_shortfall = 0;
  for (const auto& g : report.gaps) {
    switch (g.kind) {
      case GapKind::kTableUnderused:
        gap_tables.insert(g.subject);
        break;
      case GapKind::kColumnUnused: {
        const auto dot = g.subject.find('.');
        d.column_filters[g.subject.substr(0, dot)].insert(g.subject.substr(dot + 1));
        break;
      }
      case GapKind::kOperationUnderused: {
        const double shortfall = g.target_freq - g.observed_freq;
        if (shortfall > best_shortfall) {
          best_shortfall = shortfall;
          d.bias_override = g.subject == "order_by" ? "order_by" : "group_by";
        }
        break;
      }
    }
  }

  for (auto& [table, cols] : d.column_filters) {
    const TableDef* t = catalog.find_table(table);
    if (!t) continue;
    cols.insert(t->primary_key.begin(), t->primary_key.end());
    for (const auto& fk : catalog.fk_edges) {
      if (fk.from_table == table) cols.insert(fk.from_columns.begin(), fk.from_columns.end());
      if (fk.to_table == table) cols.insert(fk.to_columns.begin(), fk.to_columns.end());
    }
  }
  std::erase_if(d.column_filters, [&](const auto& kv) { return !catalog.find_table(kv.first); });

  if (!gap_tables.empty()) {
    for (const auto& s : subschemas) {
      const auto hits = std::count_if(s.tables.begin(), s.tables.end(),
                                      [&](const std::string& t) { return gap_tables.count(t) > 0; });
      d.subschema_weights[s.id] = 1.0 + static_cast<double>(hits);
    }
  }
  return d;
}

}  // namespace querygen
