#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace querygen {

enum class SqlType { kInteger, kDecimal, kFloat, kChar, kVarchar, kDate, kBoolean };

std::string_view to_string(SqlType type);
SqlType sql_type_from_string(std::string_view name);

inline bool is_numeric(SqlType t) {
  return t == SqlType::kInteger || t == SqlType::kDecimal || t == SqlType::kFloat;
}
inline bool is_textual(SqlType t) {
  return t == SqlType::kChar || t == SqlType::kVarchar;
}

struct ColumnMetadata {
  std::optional<std::uint64_t> distinct_value_count;
  // Sorted; present only when the column's distinct count is at or below
  // the enumeration threshold.
  std::optional<std::vector<std::string>> enumerated_values;
  bool is_label = false;
  std::optional<std::pair<std::string, std::string>> value_range;
  // A handful of observed values, used to synthesize string literals.
  std::vector<std::string> sample_values;

  bool empty() const {
    return !distinct_value_count && !enumerated_values && !is_label &&
           !value_range && sample_values.empty();
  }
  friend bool operator==(const ColumnMetadata&, const ColumnMetadata&) = default;
};

struct ColumnDef {
  std::string name;
  SqlType sql_type = SqlType::kVarchar;
  // Length / precision arguments as written, e.g. {15, 2} for DECIMAL(15,2).
  std::vector<int> type_args;
  bool nullable = true;
  ColumnMetadata metadata;

  friend bool operator==(const ColumnDef&, const ColumnDef&) = default;
};

struct TableDef {
  std::string name;
  std::vector<ColumnDef> columns;
  std::vector<std::string> primary_key;

  const ColumnDef* find_column(std::string_view name) const;
  ColumnDef* find_column(std::string_view name);
  bool is_primary_key_column(std::string_view column) const;

  friend bool operator==(const TableDef&, const TableDef&) = default;
};

enum class FkProvenance { kDeclared, kInferred };

struct ForeignKey {
  std::string from_table;
  std::vector<std::string> from_columns;
  std::string to_table;
  std::vector<std::string> to_columns;
  FkProvenance provenance = FkProvenance::kDeclared;

  // Same endpoints and columns, ignoring provenance.
  bool same_link(const ForeignKey& other) const {
    return from_table == other.from_table && from_columns == other.from_columns &&
           to_table == other.to_table && to_columns == other.to_columns;
  }
  friend bool operator==(const ForeignKey&, const ForeignKey&) = default;
  friend auto operator<=>(const ForeignKey& a, const ForeignKey& b) {
    return std::tie(a.from_table, a.from_columns, a.to_table, a.to_columns,
                    a.provenance) <=> std::tie(b.from_table, b.from_columns,
                                               b.to_table, b.to_columns,
                                               b.provenance);
  }
};

// Immutable once built. All identifiers are stored lower-case.
struct SchemaCatalog {
  std::string name;
  std::vector<TableDef> tables;
  std::vector<ForeignKey> fk_edges;
  std::vector<std::string> views;
  // Messages produced by best-effort steps (FK inference, profiling).
  std::vector<std::string> advisories;

  const TableDef* find_table(std::string_view name) const;
  TableDef* find_table(std::string_view name);
  const ColumnDef* find_column(std::string_view table, std::string_view column) const;

  std::size_t count_fks(FkProvenance provenance) const;

  // Throws UnknownObjectError / DuplicateObjectError when an invariant of
  // the catalog does not hold.
  void check_invariants() const;

  // Equality of structure and metadata; advisories are ignored.
  friend bool operator==(const SchemaCatalog& a, const SchemaCatalog& b) {
    return a.name == b.name && a.tables == b.tables && a.fk_edges == b.fk_edges &&
           a.views == b.views;
  }
};

std::string to_lower(std::string_view s);

nlohmann::ordered_json to_json(const SchemaCatalog& catalog);
nlohmann::ordered_json to_json(const ForeignKey& fk);
ForeignKey foreign_key_from_json(const nlohmann::json& j);
SchemaCatalog catalog_from_json(const nlohmann::json& doc);

SchemaCatalog load_catalog(const std::string& path);
void save_catalog(const SchemaCatalog& catalog, const std::string& path);

}  // namespace querygen
