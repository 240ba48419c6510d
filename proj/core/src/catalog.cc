#include "querygen/catalog.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "querygen/error.h"

namespace querygen {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {
constexpr int kCatalogSchemaVersion = 1;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view to_string(SqlType type) {
  switch (type) {
    case SqlType::kInteger: return "integer";
    case SqlType::kDecimal: return "decimal";
    case SqlType::kFloat: return "float";
    case SqlType::kChar: return "char";
    case SqlType::kVarchar: return "varchar";
    case SqlType::kDate: return "date";
    case SqlType::kBoolean: return "boolean";
  }
  return "varchar";
}

SqlType sql_type_from_string(std::string_view name) {
  const std::string n = to_lower(name);
  if (n == "integer") return SqlType::kInteger;
  if (n == "decimal") return SqlType::kDecimal;
  if (n == "float") return SqlType::kFloat;
  if (n == "char") return SqlType::kChar;
  if (n == "varchar") return SqlType::kVarchar;
  if (n == "date") return SqlType::kDate;
  if (n == "boolean") return SqlType::kBoolean;
  throw FormatError("unknown column type '" + std::string(name) + "'");
}

const ColumnDef* TableDef::find_column(std::string_view column) const {
  for (const auto& c : columns)
    if (c.name == column) return &c;
  return nullptr;
}

ColumnDef* TableDef::find_column(std::string_view column) {
  for (auto& c : columns)
    if (c.name == column) return &c;
  return nullptr;
}

bool TableDef::is_primary_key_column(std::string_view column) const {
  return std::find(primary_key.begin(), primary_key.end(), column) != primary_key.end();
}

const TableDef* SchemaCatalog::find_table(std::string_view table) const {
  for (const auto& t : tables)
    if (t.name == table) return &t;
  return nullptr;
}

TableDef* SchemaCatalog::find_table(std::string_view table) {
  for (auto& t : tables)
    if (t.name == table) return &t;
  return nullptr;
}

const ColumnDef* SchemaCatalog::find_column(std::string_view table,
                                            std::string_view column) const {
  const TableDef* t = find_table(table);
  return t ? t->find_column(column) : nullptr;
}

std::size_t SchemaCatalog::count_fks(FkProvenance provenance) const {
  return static_cast<std::size_t>(
      std::count_if(fk_edges.begin(), fk_edges.end(),
                    [&](const ForeignKey& fk) { return fk.provenance == provenance; }));
}

void SchemaCatalog::check_invariants() const {
  std::set<std::string> names;
  for (const auto& t : tables) {
    if (!names.insert(to_lower(t.name)).second)
      throw DuplicateObjectError("duplicate table '" + t.name + "'");
    std::set<std::string> cols;
    for (const auto& c : t.columns)
      if (!cols.insert(to_lower(c.name)).second)
        throw DuplicateObjectError("duplicate column '" + t.name + "." + c.name + "'");
    for (const auto& pk : t.primary_key)
      if (!t.find_column(pk))
        throw UnknownObjectError("primary key column '" + t.name + "." + pk +
                                 "' does not exist");
    for (const auto& c : t.columns) {
      const auto& md = c.metadata;
      if (md.enumerated_values &&
          md.distinct_value_count != md.enumerated_values->size())
        throw FormatError("column '" + t.name + "." + c.name +
                          "': enumerated_values disagree with distinct_value_count");
    }
  }
  for (const auto& fk : fk_edges) {
    if (fk.from_columns.empty() || fk.from_columns.size() != fk.to_columns.size())
      throw FormatError("foreign key " + fk.from_table + " -> " + fk.to_table +
                        " has mismatched column lists");
    for (std::size_t i = 0; i < fk.from_columns.size(); ++i) {
      if (!find_column(fk.from_table, fk.from_columns[i]))
        throw UnknownObjectError("foreign key column '" + fk.from_table + "." +
                                 fk.from_columns[i] + "' does not exist");
      if (!find_column(fk.to_table, fk.to_columns[i]))
        throw UnknownObjectError("referenced column '" + fk.to_table + "." +
                                 fk.to_columns[i] + "' does not exist");
    }
  }
}

// --- JSON ------------------------------------------------------------------

namespace {

ordered_json metadata_to_json(const ColumnMetadata& md) {
  ordered_json j = ordered_json::object();
  if (md.distinct_value_count) j["distinct_value_count"] = *md.distinct_value_count;
  if (md.enumerated_values) j["enumerated_values"] = *md.enumerated_values;
  if (md.is_label) j["is_label"] = true;
  if (md.value_range)
    j["value_range"] = ordered_json::array({md.value_range->first, md.value_range->second});
  if (!md.sample_values.empty()) j["sample_values"] = md.sample_values;
  return j;
}

ColumnMetadata metadata_from_json(const json& j) {
  ColumnMetadata md;
  if (j.contains("distinct_value_count"))
    md.distinct_value_count = j.at("distinct_value_count").get<std::uint64_t>();
  if (j.contains("enumerated_values"))
    md.enumerated_values = j.at("enumerated_values").get<std::vector<std::string>>();
  md.is_label = j.value("is_label", false);
  if (j.contains("value_range")) {
    const auto& r = j.at("value_range");
    md.value_range = std::make_pair(r.at(0).get<std::string>(), r.at(1).get<std::string>());
  }
  if (j.contains("sample_values"))
    md.sample_values = j.at("sample_values").get<std::vector<std::string>>();
  return md;
}

}  // namespace

ordered_json to_json(const ForeignKey& fk) {
  ordered_json jf;
  jf["from_table"] = fk.from_table;
  jf["from_columns"] = fk.from_columns;
  jf["to_table"] = fk.to_table;
  jf["to_columns"] = fk.to_columns;
  jf["provenance"] = fk.provenance == FkProvenance::kDeclared ? "declared" : "inferred";
  return jf;
}

ForeignKey foreign_key_from_json(const json& jf) {
  ForeignKey fk;
  fk.from_table = jf.at("from_table").get<std::string>();
  fk.from_columns = jf.at("from_columns").get<std::vector<std::string>>();
  fk.to_table = jf.at("to_table").get<std::string>();
  fk.to_columns = jf.at("to_columns").get<std::vector<std::string>>();
  fk.provenance = jf.value("provenance", std::string("declared")) == "inferred"
                      ? FkProvenance::kInferred
                      : FkProvenance::kDeclared;
  return fk;
}

ordered_json to_json(const SchemaCatalog& catalog) {
  ordered_json doc;
  doc["schema_version"] = kCatalogSchemaVersion;
  doc["name"] = catalog.name;
  ordered_json tables = ordered_json::array();
  for (const auto& t : catalog.tables) {
    ordered_json jt;
    jt["name"] = t.name;
    ordered_json cols = ordered_json::array();
    for (const auto& c : t.columns) {
      ordered_json jc;
      jc["name"] = c.name;
      jc["type"] = std::string(to_string(c.sql_type));
      if (!c.type_args.empty()) jc["type_args"] = c.type_args;
      jc["nullable"] = c.nullable;
      if (!c.metadata.empty()) jc["metadata"] = metadata_to_json(c.metadata);
      cols.push_back(std::move(jc));
    }
    jt["columns"] = std::move(cols);
    jt["primary_key"] = t.primary_key;
    tables.push_back(std::move(jt));
  }
  doc["tables"] = std::move(tables);
  ordered_json fks = ordered_json::array();
  for (const auto& fk : catalog.fk_edges) {
    fks.push_back(to_json(fk));
  }
  doc["foreign_keys"] = std::move(fks);
  doc["views"] = catalog.views;
  doc["advisories"] = catalog.advisories;
  return doc;
}

SchemaCatalog catalog_from_json(const json& doc) {
  try {
    if (doc.value("schema_version", 0) != kCatalogSchemaVersion)
      throw FormatError("unsupported catalog schema_version");
    SchemaCatalog catalog;
    catalog.name = doc.value("name", std::string{});
    for (const auto& jt : doc.at("tables")) {
      TableDef t;
      t.name = jt.at("name").get<std::string>();
      for (const auto& jc : jt.at("columns")) {
        ColumnDef c;
        c.name = jc.at("name").get<std::string>();
        c.sql_type = sql_type_from_string(jc.at("type").get<std::string>());
        if (jc.contains("type_args")) c.type_args = jc.at("type_args").get<std::vector<int>>();
        c.nullable = jc.value("nullable", true);
        if (jc.contains("metadata")) c.metadata = metadata_from_json(jc.at("metadata"));
        t.columns.push_back(std::move(c));
      }
      t.primary_key = jt.value("primary_key", std::vector<std::string>{});
      catalog.tables.push_back(std::move(t));
    }
    for (const auto& jf : doc.value("foreign_keys", json::array())) {
      catalog.fk_edges.push_back(foreign_key_from_json(jf));
    }
    catalog.views = doc.value("views", std::vector<std::string>{});
    catalog.advisories = doc.value("advisories", std::vector<std::string>{});
    catalog.check_invariants();
    return catalog;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed catalog JSON: ") + e.what());
  }
}

SchemaCatalog load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open catalog file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw FormatError("cannot parse catalog file '" + path + "': " + e.what());
  }
  return catalog_from_json(doc);
}

void save_catalog(const SchemaCatalog& catalog, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write catalog file '" + path + "'");
  out << to_json(catalog).dump(2) << '\n';
}

}  // namespace querygen
