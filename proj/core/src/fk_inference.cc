#include <algorithm>

#include "querygen/schema.h"

namespace querygen {

std::string column_prefix(const TableDef& table, const FkInferenceOptions& options) {
  if (auto it = options.prefixes.find(table.name); it != options.prefixes.end())
    return to_lower(it->second);
  if (!options.auto_prefix || table.columns.empty()) return {};
  const std::string& first = table.columns.front().name;
  const auto cut = first.find('_');
  if (cut == std::string::npos || cut + 1 == first.size()) return {};
  const std::string prefix = first.substr(0, cut + 1);
  for (const auto& c : table.columns)
    if (c.name.rfind(prefix, 0) != 0 || c.name.size() == prefix.size()) return {};
  return prefix;
}

namespace {

std::string strip(const std::string& name, const std::string& prefix) {
  if (!prefix.empty() && name.rfind(prefix, 0) == 0) return name.substr(prefix.size());
  return name;
}

void add_advisory(SchemaCatalog& catalog, std::string message) {
  if (std::find(catalog.advisories.begin(), catalog.advisories.end(), message) ==
      catalog.advisories.end())
    catalog.advisories.push_back(std::move(message));
}

}  // namespace

SchemaCatalog infer_foreign_keys(const SchemaCatalog& catalog, const FkInferenceOptions& options) {
  SchemaCatalog out = catalog;

  struct Key {
    const TableDef* table;
    std::string stem;
  };
  std::vector<Key> keys;
  for (const auto& t : catalog.tables)
    if (t.primary_key.size() == 1)
      keys.push_back({&t, strip(t.primary_key.front(), column_prefix(t, options))});

  for (const auto& a : catalog.tables) {
    const std::string prefix = column_prefix(a, options);
    for (const auto& c : a.columns) {
      // A table's own single-column key is never a reference.
      if (a.primary_key.size() == 1 && a.primary_key.front() == c.name) continue;
      const std::string stem = strip(c.name, prefix);
      std::vector<const TableDef*> candidates;
      for (const auto& k : keys)
        if (k.table != &a && k.stem == stem) candidates.push_back(k.table);
      if (candidates.empty()) continue;
      if (candidates.size() > 1) {
        std::string names;
        for (const auto* t : candidates) names += (names.empty() ? "" : ", ") + t->name;
        add_advisory(out, "ambiguous foreign key candidate " + a.name + "." + c.name +
                              " matches keys of " + names + "; skipped");
        continue;
      }
      ForeignKey fk;
      fk.from_table = a.name;
      fk.from_columns = {c.name};
      fk.to_table = candidates.front()->name;
      fk.to_columns = candidates.front()->primary_key;
      fk.provenance = FkProvenance::kInferred;
      const bool exists = std::any_of(out.fk_edges.begin(), out.fk_edges.end(),
                                      [&](const ForeignKey& e) { return e.same_link(fk); });
      if (!exists) out.fk_edges.push_back(std::move(fk));
    }
  }
  return out;
}

}  // namespace querygen
