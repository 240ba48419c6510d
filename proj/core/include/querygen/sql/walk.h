#pragma once

#include "querygen/sql/ast.h"

namespace querygen::sql {

// Pre-order traversal over every node of a query, descending into CTEs,
// derived tables, set-operation branches and expression subqueries.
class Visitor {
 public:
  virtual ~Visitor() = default;
  virtual void on_query(const Query&) {}
  virtual void on_select(const Select&) {}
  virtual void on_table_ref(const TableRef&) {}
  virtual void on_expr(const Expr&) {}
};

void walk(const Query& query, Visitor& visitor);
void walk(const Expr& expr, Visitor& visitor);

}  // namespace querygen::sql
