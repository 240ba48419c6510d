#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

// Syntax tree for SQL SELECT statements. Identifiers and operator names are
// stored lower-case; string literal contents keep their original case.

namespace querygen::sql {

struct Query;
struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class ExprKind {
  kColumn,    // [qualifier.]name
  kStar,      // * or qualifier.*
  kLiteral,
  kUnary,     // op: "-", "+", "not"
  kBinary,    // arithmetic, "||", comparisons, "and", "or"
  kFunction,  // op = function name
  kCase,
  kCast,      // args[0]; name = target type
  kIn,        // args[0] IN (args[1..]) or IN (subquery)
  kBetween,   // args[0] BETWEEN args[1] AND args[2]
  kLike,      // args[0] LIKE args[1] [ESCAPE args[2]]; op = "like" | "ilike"
  kIsNull,    // args[0] IS [NOT] NULL
  kIsBool,    // args[0] IS [NOT] TRUE|FALSE; name = "true" | "false"
  kExists,    // EXISTS (subquery)
  kSubquery,  // scalar subquery; op may hold "any" / "all" / "some"
};

enum class LiteralKind { kNumber, kString, kDate, kTimestamp, kInterval, kNull, kBoolean };

struct OrderItem {
  ExprPtr expr;
  bool descending = false;
};

struct WindowSpec {
  std::vector<ExprPtr> partition_by;
  std::vector<OrderItem> order_by;
  std::string frame;  // raw frame clause text, if any
};

struct Expr {
  ExprKind kind = ExprKind::kLiteral;
  std::size_t position = 0;

  std::string op;
  std::string qualifier;
  std::string name;

  LiteralKind literal_kind = LiteralKind::kNull;
  std::string literal;

  std::vector<ExprPtr> args;
  std::unique_ptr<Query> subquery;

  bool negated = false;
  bool distinct = false;          // COUNT(DISTINCT x)
  bool star_arg = false;          // COUNT(*)
  bool has_case_operand = false;  // CASE x WHEN ...; operand is args[0]
  bool has_else = false;          // ELSE result is args.back()
  ExprPtr filter;                 // agg(...) FILTER (WHERE filter)
  std::unique_ptr<WindowSpec> over;
};

enum class TableRefKind { kTable, kDerived, kJoin };

struct TableRef {
  TableRefKind kind = TableRefKind::kTable;
  std::size_t position = 0;

  std::string name;   // base table name (kTable)
  std::string alias;  // empty when not aliased
  std::vector<std::string> column_aliases;
  std::unique_ptr<Query> subquery;  // kDerived

  // kJoin
  std::string join_type;  // "inner" | "left" | "right" | "full" | "cross"
  bool natural = false;
  std::unique_ptr<TableRef> left;
  std::unique_ptr<TableRef> right;
  ExprPtr on;
  std::vector<std::string> using_columns;
};

struct SelectItem {
  ExprPtr expr;
  std::string alias;
};

struct Select {
  std::size_t position = 0;
  bool distinct = false;
  std::vector<SelectItem> items;
  std::vector<std::unique_ptr<TableRef>> from;  // comma-separated list
  ExprPtr where;
  std::vector<ExprPtr> group_by;
  ExprPtr having;
  std::vector<OrderItem> order_by;
  ExprPtr limit;
  ExprPtr offset;
};

struct Cte {
  std::string name;
  std::vector<std::string> columns;
  std::unique_ptr<Query> query;
};

// A query expression. Exactly one of `select`, a set operation
// (`set_op` with `left`/`right`) or `nested` is populated.
struct Query {
  std::size_t position = 0;
  bool recursive = false;
  std::vector<Cte> with;

  std::unique_ptr<Select> select;

  std::string set_op;  // "union" | "intersect" | "except"
  bool set_all = false;
  std::unique_ptr<Query> left;
  std::unique_ptr<Query> right;

  std::unique_ptr<Query> nested;

  // ORDER BY / LIMIT applying to a set operation or nested query. For a
  // plain SELECT these live on the Select node.
  std::vector<OrderItem> order_by;
  ExprPtr limit;
  ExprPtr offset;

  bool is_select() const { return select != nullptr; }
  bool is_set_op() const { return !set_op.empty(); }
};

}  // namespace querygen::sql
