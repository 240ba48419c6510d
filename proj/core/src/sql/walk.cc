#include "querygen/sql/walk.h"

namespace querygen::sql {

namespace {

void walk_ref(const TableRef& ref, Visitor& v) {
  v.on_table_ref(ref);
  switch (ref.kind) {
    case TableRefKind::kTable:
      break;
    case TableRefKind::kDerived:
      walk(*ref.subquery, v);
      break;
    case TableRefKind::kJoin:
      walk_ref(*ref.left, v);
      walk_ref(*ref.right, v);
      if (ref.on) walk(*ref.on, v);
      break;
  }
}

void walk_select(const Select& s, Visitor& v) {
  v.on_select(s);
  for (const auto& item : s.items) walk(*item.expr, v);
  for (const auto& ref : s.from) walk_ref(*ref, v);
  if (s.where) walk(*s.where, v);
  for (const auto& g : s.group_by) walk(*g, v);
  if (s.having) walk(*s.having, v);
  for (const auto& o : s.order_by) walk(*o.expr, v);
  if (s.limit) walk(*s.limit, v);
  if (s.offset) walk(*s.offset, v);
}

}  // namespace

void walk(const Query& q, Visitor& v) {
  v.on_query(q);
  for (const auto& cte : q.with) walk(*cte.query, v);
  if (q.select) walk_select(*q.select, v);
  if (q.left) walk(*q.left, v);
  if (q.right) walk(*q.right, v);
  if (q.nested) walk(*q.nested, v);
  for (const auto& o : q.order_by) walk(*o.expr, v);
  if (q.limit) walk(*q.limit, v);
  if (q.offset) walk(*q.offset, v);
}

void walk(const Expr& e, Visitor& v) {
  v.on_expr(e);
  for (const auto& a : e.args) walk(*a, v);
  if (e.filter) walk(*e.filter, v);
  if (e.over) {
    for (const auto& p : e.over->partition_by) walk(*p, v);
    for (const auto& o : e.over->order_by) walk(*o.expr, v);
  }
  if (e.subquery) walk(*e.subquery, v);
}

}  // namespace querygen::sql
