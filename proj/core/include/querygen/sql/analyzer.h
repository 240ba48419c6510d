#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "querygen/catalog.h"
#include "querygen/sql/ast.h"

namespace querygen::sql {

enum class IssueKind {
  kUnknownTable,
  kUnknownQualifier,
  kUnknownColumn,
  kAmbiguousColumn,
};

struct Issue {
  IssueKind kind;
  std::string subject;
  std::size_t position = 0;
};

enum class BindingKind {
  kBaseColumn,     // a catalog table column
  kDerivedColumn,  // output column of a derived table or CTE
  kOutputAlias,    // select-list alias referenced from GROUP BY/HAVING/ORDER BY
};

struct Binding {
  BindingKind kind = BindingKind::kBaseColumn;
  std::string table;   // catalog table for kBaseColumn
  std::string column;
};

struct ColumnUse {
  std::string table;
  std::string column;
  const Expr* expr = nullptr;
};

// Name resolution of a parsed query against a catalog.
//
// Resolution rules: a qualified reference binds to the FROM item whose
// visible name (alias, else table name) matches, searching enclosing scopes
// outward. An unqualified reference binds to the unique FROM item exposing
// that column in the innermost scope that has one; two or more candidates
// in that scope are ambiguous unless the column is a USING/NATURAL join
// column. GROUP BY, HAVING and ORDER BY fall back to select-list aliases
// when no FROM item exposes the name. CTE names shadow catalog tables.
struct Analysis {
  std::vector<std::string> table_uses;  // one entry per base-table occurrence
  std::vector<ColumnUse> column_uses;   // one entry per base-column reference
  std::vector<Issue> issues;
  std::unordered_map<const Expr*, Binding> bindings;

  const Binding* binding(const Expr* e) const {
    auto it = bindings.find(e);
    return it == bindings.end() ? nullptr : &it->second;
  }
  // The catalog column an expression refers to, or nullptr.
  const ColumnDef* base_column(const Expr* e, const SchemaCatalog& catalog) const;
};

Analysis analyze(const Query& query, const SchemaCatalog& catalog);

}  // namespace querygen::sql
