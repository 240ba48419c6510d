#include "querygen/mech_generator.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "querygen/error.h"
#include "querygen/hash.h"
#include "querygen/random.h"
#include "querygen/record.h"
#include "internal/dates.h"

namespace querygen {

namespace {

using internal::civil_from_days;
using internal::days_from_civil;
using internal::parse_date;

const std::set<std::string> kAggregates = {"COUNT", "SUM", "AVG", "MIN", "MAX"};

struct Col {
  const TableDef* table;
  const ColumnDef* def;
  std::string ref() const { return table->name + "." + def->name; }
};

std::optional<double> to_number(const std::string& s) {
  double v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    out += c;
    if (c == '\'') out += '\'';
  }
  return out + "'";
}

std::string format_number(double v, SqlType type) {
  if (type == SqlType::kInteger) return std::to_string(static_cast<long long>(std::llround(v)));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

class QueryBuilder {
 public:
  QueryBuilder(const Subschema& sub, const SchemaCatalog& catalog, const MechConfig& config)
      : config_(config) {
    for (const auto& name : sub.tables) {
      const TableDef* t = catalog.find_table(name);
      if (!t) throw UnknownObjectError("subschema table '" + name + "' is not in the catalog");
      for (const auto& c : t->columns) columns_.push_back({t, &c});
    }
    for (const auto& fk : sub.spanning_joins) {
      const TableDef* a = catalog.find_table(fk.from_table);
      const TableDef* b = catalog.find_table(fk.to_table);
      if (!a || !b) throw UnknownObjectError("spanning join references a missing table");
      for (std::size_t i = 0; i < fk.from_columns.size(); ++i)
        if (!a->find_column(fk.from_columns[i]) || !b->find_column(fk.to_columns[i]))
          throw UnknownObjectError("spanning join references a missing column");
      if (!std::count(sub.tables.begin(), sub.tables.end(), fk.from_table) ||
          !std::count(sub.tables.begin(), sub.tables.end(), fk.to_table))
        throw UnknownObjectError("spanning join leaves the subschema");
    }
    if (sub.tables.empty() || sub.spanning_joins.size() + 1 != sub.tables.size())
      throw UnknownObjectError("subschema '" + sub.id + "' has an invalid spanning tree");
    from_ = from_clause(sub);
    for (const auto& c : columns_) {
      if (c.def->metadata.is_label) continue;
      if (is_numeric(c.def->sql_type)) numeric_.push_back(c);
      if (is_numeric(c.def->sql_type) || c.def->sql_type == SqlType::kDate) ordered_.push_back(c);
    }
    for (const auto& a : config.aggregate_functions) aggregates_.push_back(to_upper(a));
  }

  std::string build(Rng& rng) {
    const bool grouping = rng.bernoulli(config_.p_group_by);
    const bool aggregate_only = !grouping && rng.bernoulli(config_.p_aggregate);
    const auto [lo, hi] = config_.projection_count_range;
    const auto k = static_cast<std::size_t>(rng.uniform_int(lo, hi));

    std::vector<std::string> projections;
    std::vector<std::string> group_by;
    if (grouping) {
      for (auto i : rng.sample_indices(columns_.size(), std::min(k, columns_.size())))
        group_by.push_back(columns_[i].ref());
      projections = group_by;
      const auto naggs = rng.uniform_int(1, 2);
      for (int i = 0; i < naggs; ++i) projections.push_back(aggregate(rng));
    } else if (aggregate_only) {
      const auto naggs = std::max<std::size_t>(1, std::min<std::size_t>(k, 3));
      for (std::size_t i = 0; i < naggs; ++i) projections.push_back(aggregate(rng));
    } else {
      for (auto i : rng.sample_indices(columns_.size(), std::min(k, columns_.size())))
        projections.push_back(columns_[i].ref());
    }

    std::string sql = "SELECT " + join(projections, ", ") + " FROM " + from_;
    if (rng.bernoulli(config_.p_where)) {
      const auto npred = rng.uniform_int(1, std::max(1, config_.max_predicates));
      std::vector<std::string> preds;
      for (int i = 0; i < npred; ++i) preds.push_back(predicate(rng));
      sql += " WHERE " + join(preds, " AND ");
    }
    if (grouping) {
      sql += " GROUP BY " + join(group_by, ", ");
      if (rng.bernoulli(config_.p_having))
        sql += " HAVING COUNT(*) > " + std::to_string(rng.uniform_int(1, 10));
    }
    if (rng.bernoulli(config_.p_order_by)) {
      const auto nitems = std::min<std::size_t>(projections.size(),
                                                static_cast<std::size_t>(rng.uniform_int(1, 2)));
      std::vector<std::string> items;
      for (auto i : rng.sample_indices(projections.size(), nitems))
        items.push_back(projections[i] + (rng.bernoulli(0.5) ? " DESC" : " ASC"));
      sql += " ORDER BY " + join(items, ", ");
    }
    return sql;
  }

 private:
  static std::string to_upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
  }

  static std::string join(const std::vector<std::string>& items, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += sep;
      out += items[i];
    }
    return out;
  }

  // Breadth-first over the spanning tree from the first table.
  static std::string from_clause(const Subschema& sub) {
    std::set<std::string> placed = {sub.tables.front()};
    std::string out = sub.tables.front();
    std::vector<bool> used(sub.spanning_joins.size(), false);
    for (std::size_t placed_count = 1; placed_count < sub.tables.size();) {
      bool progress = false;
      for (std::size_t i = 0; i < sub.spanning_joins.size(); ++i) {
        if (used[i]) continue;
        const auto& fk = sub.spanning_joins[i];
        const bool has_from = placed.count(fk.from_table) > 0;
        const bool has_to = placed.count(fk.to_table) > 0;
        if (has_from == has_to) continue;
        const std::string& next = has_from ? fk.to_table : fk.from_table;
        std::vector<std::string> conds;
        for (std::size_t c = 0; c < fk.from_columns.size(); ++c)
          conds.push_back(fk.from_table + "." + fk.from_columns[c] + " = " + fk.to_table + "." +
                          fk.to_columns[c]);
        out += " INNER JOIN " + next + " ON " + join(conds, " AND ");
        placed.insert(next);
        used[i] = true;
        ++placed_count;
        progress = true;
      }
      if (!progress) throw UnknownObjectError("spanning joins do not connect the subschema");
    }
    return out;
  }

  std::string aggregate(Rng& rng) {
    if (aggregates_.empty()) return "COUNT(*)";
    const std::string& fn = rng.pick(aggregates_);
    if (fn == "SUM" || fn == "AVG") {
      if (numeric_.empty()) return "COUNT(*)";
      return fn + "(" + rng.pick(numeric_).ref() + ")";
    }
    if (fn == "MIN" || fn == "MAX") {
      if (ordered_.empty()) return "COUNT(*)";
      return fn + "(" + rng.pick(ordered_).ref() + ")";
    }
    return "COUNT(*)";
  }

  std::string literal_of(const ColumnDef& c, const std::string& value) const {
    if (is_numeric(c.sql_type) && to_number(value)) return value;
    return quote(value);
  }

  std::string predicate(Rng& rng) {
    const Col& col = rng.pick(columns_);
    const ColumnDef& c = *col.def;
    const std::string ref = col.ref();
    const auto& md = c.metadata;

    if (md.enumerated_values && !md.enumerated_values->empty()) {
      const auto& values = *md.enumerated_values;
      if (values.size() > 1 && rng.bernoulli(0.4)) {
        const auto take = static_cast<std::size_t>(
            rng.uniform_int(2, static_cast<std::int64_t>(std::min<std::size_t>(3, values.size()))));
        std::vector<std::string> lits;
        for (auto i : rng.sample_indices(values.size(), take)) lits.push_back(literal_of(c, values[i]));
        return ref + " IN (" + join(lits, ", ") + ")";
      }
      return ref + " = " + literal_of(c, rng.pick(values));
    }

    if (md.is_label) {
      if (!md.sample_values.empty()) return ref + " = " + literal_of(c, rng.pick(md.sample_values));
      return ref + " IS NOT NULL";
    }

    switch (c.sql_type) {
      case SqlType::kInteger:
      case SqlType::kDecimal:
      case SqlType::kFloat: {
        double lo = 0, hi = 1000;
        if (md.value_range) {
          auto a = to_number(md.value_range->first), b = to_number(md.value_range->second);
          if (a && b && *a <= *b) lo = *a, hi = *b;
        }
        static const std::vector<std::string> kOps = {"=", "<", "<=", ">", ">=", "BETWEEN"};
        const std::string& op = rng.pick(kOps);
        if (op == "BETWEEN") {
          double x = rng.uniform_real(lo, hi), y = rng.uniform_real(lo, hi);
          if (x > y) std::swap(x, y);
          return ref + " BETWEEN " + format_number(x, c.sql_type) + " AND " +
                 format_number(y, c.sql_type);
        }
        return ref + " " + op + " " + format_number(rng.uniform_real(lo, hi), c.sql_type);
      }
      case SqlType::kDate: {
        long lo = days_from_civil(1992, 1, 1), hi = days_from_civil(1998, 12, 31);
        if (md.value_range) {
          auto a = parse_date(md.value_range->first), b = parse_date(md.value_range->second);
          if (a && b && *a <= *b) lo = *a, hi = *b;
        }
        static const std::vector<std::string> kOps = {"<", ">=", "BETWEEN"};
        const std::string& op = rng.pick(kOps);
        if (op == "BETWEEN") {
          long x = rng.uniform_int(lo, hi), y = rng.uniform_int(lo, hi);
          if (x > y) std::swap(x, y);
          return ref + " BETWEEN " + quote(civil_from_days(x)) + " AND " + quote(civil_from_days(y));
        }
        return ref + " " + op + " " + quote(civil_from_days(rng.uniform_int(lo, hi)));
      }
      case SqlType::kBoolean:
        return ref + (rng.bernoulli(0.5) ? " = TRUE" : " = FALSE");
      case SqlType::kChar:
      case SqlType::kVarchar:
        break;
    }
    if (md.sample_values.empty()) return ref + " = " + quote("value");
    const std::string& v = rng.pick(md.sample_values);
    if (v.size() > 2 && rng.bernoulli(0.3)) {
      const auto len = static_cast<std::size_t>(
          rng.uniform_int(1, static_cast<std::int64_t>(std::min<std::size_t>(3, v.size() - 1))));
      std::string prefix = v.substr(0, len);
      std::erase_if(prefix, [](char ch) { return ch == '%' || ch == '_'; });
      return ref + " LIKE " + quote(prefix + "%");
    }
    return ref + " = " + quote(v);
  }

  const MechConfig& config_;
  std::vector<Col> columns_;
  std::vector<Col> numeric_;  // non-label numeric
  std::vector<Col> ordered_;  // non-label numeric or date
  std::vector<std::string> aggregates_;
  std::string from_;
};

bool in_unit(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void MechConfig::validate() const {
  const std::pair<const char*, double> probs[] = {{"p_where", p_where},
                                                  {"p_group_by", p_group_by},
                                                  {"p_order_by", p_order_by},
                                                  {"p_having", p_having},
                                                  {"p_aggregate", p_aggregate}};
  for (const auto& [name, p] : probs)
    if (!in_unit(p)) throw ConfigError(std::string(name) + " must be in [0,1]");
  if (p_having > 0 && p_group_by <= 0) throw ConfigError("p_having > 0 requires p_group_by > 0");
  if (max_predicates < 1) throw ConfigError("max_predicates must be at least 1");
  if (projection_count_range.first < 1 || projection_count_range.first > projection_count_range.second)
    throw ConfigError("projection_count_range must be a nonempty range of positive counts");
  for (const auto& a : aggregate_functions) {
    std::string up = a;
    for (auto& ch : up) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (!kAggregates.count(up)) throw ConfigError("unsupported aggregate function '" + a + "'");
  }
}

nlohmann::ordered_json to_json(const MechConfig& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["p_where"] = c.p_where;
  j["p_group_by"] = c.p_group_by;
  j["p_order_by"] = c.p_order_by;
  j["p_having"] = c.p_having;
  j["max_predicates"] = c.max_predicates;
  j["aggregate_functions"] = c.aggregate_functions;
  j["p_aggregate"] = c.p_aggregate;
  j["projection_count_range"] = {c.projection_count_range.first, c.projection_count_range.second};
  return j;
}

std::vector<std::string> generate_mechanical_sql(const Subschema& subschema,
                                                 const SchemaCatalog& catalog,
                                                 const MechConfig& config, std::size_t n) {
  config.validate();
  QueryBuilder builder(subschema, catalog, config);
  Rng rng(derive_seed(config.seed, subschema.id));
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(builder.build(rng));
  return out;
}

std::vector<QueryRecord> generate_mechanical(const Subschema& subschema,
                                             const SchemaCatalog& catalog,
                                             const MechConfig& config, std::size_t n, int batch) {
  std::vector<QueryRecord> out;
  for (auto& sql : generate_mechanical_sql(subschema, catalog, config, n))
    out.push_back(make_record(std::move(sql), kOriginMechanical, subschema.id, batch));
  return out;
}

}  // namespace querygen
