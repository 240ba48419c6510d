#include "querygen/sql/parser.h"

#include <array>
#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "querygen/error.h"
#include "querygen/sql/lexer.h"

namespace querygen::sql {

namespace {

constexpr std::string_view kReserved[] = {
    "all",      "and",       "any",     "as",      "asc",       "between",
    "by",       "case",      "cross",   "desc",    "distinct",  "else",
    "end",      "escape",    "except",  "exists",  "false",     "fetch",
    "filter",   "for",       "from",    "full",    "group",     "having",
    "ilike",    "in",        "inner",   "intersect", "into",    "is",
    "join",     "lateral",   "left",    "like",    "limit",     "natural",
    "not",      "null",      "offset",  "on",      "or",        "order",
    "outer",    "over",      "right",   "select",  "then",      "true",
    "union",    "using",     "when",    "where",
};

bool is_comparison(std::string_view sym) {
  return sym == "=" || sym == "<>" || sym == "!=" || sym == "<" || sym == "<=" ||
         sym == ">" || sym == ">=";
}

ExprPtr make_expr(ExprKind kind, std::size_t position) {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->position = position;
  return e;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  std::unique_ptr<Query> parse_statement() {
    auto q = parse_query();
    if (peek().is_symbol(";")) advance();
    if (peek().kind != TokenKind::kEnd) fail("unexpected '" + peek().text + "' after end of statement");
    return q;
  }

 private:
  // --- token helpers -------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& advance() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept_word(std::string_view w) {
    if (peek().is_word(w)) {
      advance();
      return true;
    }
    return false;
  }
  bool accept_symbol(std::string_view s) {
    if (peek().is_symbol(s)) {
      advance();
      return true;
    }
    return false;
  }
  void expect_word(std::string_view w) {
    if (!accept_word(w)) fail("expected " + upper(w));
  }
  void expect_symbol(std::string_view s) {
    if (!accept_symbol(s)) fail("expected '" + std::string(s) + "'");
  }
  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    std::string near = t.kind == TokenKind::kEnd ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(t.position, message + " near " + near);
  }
  static std::string upper(std::string_view w) {
    std::string out(w);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
  }

  bool at_identifier() const {
    const Token& t = peek();
    return t.kind == TokenKind::kQuotedIdentifier ||
           (t.kind == TokenKind::kIdentifier && !is_reserved_word(t.lower));
  }
  std::string expect_identifier(std::string_view what) {
    if (!at_identifier()) fail("expected " + std::string(what));
    return advance().lower;
  }
  bool starts_query() const { return peek().is_word("select") || peek().is_word("with"); }

  // --- queries -------------------------------------------------------------

  std::unique_ptr<Query> parse_query() {
    const std::size_t start = peek().position;
    std::vector<Cte> ctes;
    bool recursive = false;
    if (accept_word("with")) {
      recursive = accept_word("recursive");
      do {
        Cte cte;
        cte.name = expect_identifier("CTE name");
        if (accept_symbol("(")) {
          do {
            cte.columns.push_back(expect_identifier("column name"));
          } while (accept_symbol(","));
          expect_symbol(")");
        }
        expect_word("as");
        expect_symbol("(");
        cte.query = parse_query();
        expect_symbol(")");
        ctes.push_back(std::move(cte));
      } while (accept_symbol(","));
    }

    auto body = parse_set_expr();
    if (!ctes.empty()) {
      if (!body->with.empty()) body = wrap(std::move(body));
      body->with = std::move(ctes);
      body->recursive = recursive;
    }

    std::vector<OrderItem> order_by;
    ExprPtr limit, offset;
    if (accept_word("order")) {
      expect_word("by");
      order_by = parse_order_items();
    }
    parse_limit_offset(limit, offset);

    if (!order_by.empty() || limit || offset) {
      Select* s = body->select.get();
      const bool select_free = s && s->order_by.empty() && !s->limit && !s->offset;
      const bool query_free = body->order_by.empty() && !body->limit && !body->offset;
      if (select_free) {
        s->order_by = std::move(order_by);
        s->limit = std::move(limit);
        s->offset = std::move(offset);
      } else {
        if (!query_free || s) body = wrap(std::move(body));
        body->order_by = std::move(order_by);
        body->limit = std::move(limit);
        body->offset = std::move(offset);
      }
    }
    body->position = start;
    return body;
  }

  // Wraps `inner` in a query whose only content is the nested query.
  static std::unique_ptr<Query> wrap(std::unique_ptr<Query> inner) {
    auto q = std::make_unique<Query>();
    q->position = inner->position;
    q->nested = std::move(inner);
    return q;
  }

  void parse_limit_offset(ExprPtr& limit, ExprPtr& offset) {
    for (;;) {
      if (!limit && accept_word("limit")) {
        if (accept_word("all")) {
          limit = make_expr(ExprKind::kLiteral, peek().position);
          limit->literal_kind = LiteralKind::kNull;
          continue;
        }
        limit = parse_expr();
        if (accept_symbol(",")) {  // LIMIT offset, count
          offset = std::move(limit);
          limit = parse_expr();
        }
        continue;
      }
      if (!offset && accept_word("offset")) {
        offset = parse_expr();
        if (!accept_word("rows")) accept_word("row");
        continue;
      }
      if (!limit && accept_word("fetch")) {
        if (!accept_word("first")) expect_word("next");
        if (peek().is_word("row") || peek().is_word("rows")) {
          limit = make_expr(ExprKind::kLiteral, peek().position);
          limit->literal_kind = LiteralKind::kNumber;
          limit->literal = "1";
        } else {
          limit = parse_expr();
        }
        if (!accept_word("rows")) expect_word("row");
        expect_word("only");
        continue;
      }
      break;
    }
  }

  std::unique_ptr<Query> parse_set_expr() {
    auto left = parse_set_term();
    for (;;) {
      std::string op;
      if (peek().is_word("union") || peek().is_word("intersect") || peek().is_word("except")) {
        op = advance().lower;
      } else {
        break;
      }
      auto q = std::make_unique<Query>();
      q->position = left->position;
      q->set_op = op;
      if (accept_word("all")) q->set_all = true;
      else accept_word("distinct");
      q->left = std::move(left);
      q->right = parse_set_term();
      left = std::move(q);
    }
    return left;
  }

  std::unique_ptr<Query> parse_set_term() {
    if (peek().is_symbol("(")) {
      std::size_t depth = 0;
      while (peek(depth).is_symbol("(")) ++depth;
      if (peek(depth).is_word("select") || peek(depth).is_word("with")) {
        advance();
        auto inner = parse_query();
        expect_symbol(")");
        return inner;
      }
    }
    if (!peek().is_word("select")) fail("expected SELECT");
    auto q = std::make_unique<Query>();
    q->position = peek().position;
    q->select = parse_select_core();
    return q;
  }

  std::unique_ptr<Select> parse_select_core() {
    auto s = std::make_unique<Select>();
    s->position = peek().position;
    expect_word("select");
    if (accept_word("distinct")) s->distinct = true;
    else accept_word("all");

    do {
      s->items.push_back(parse_select_item());
    } while (accept_symbol(","));

    if (accept_word("from")) {
      do {
        s->from.push_back(parse_table_ref());
      } while (accept_symbol(","));
    }
    if (accept_word("where")) s->where = parse_expr();
    if (peek().is_word("group")) {
      advance();
      expect_word("by");
      do {
        s->group_by.push_back(parse_expr());
      } while (accept_symbol(","));
    }
    if (accept_word("having")) s->having = parse_expr();
    return s;
  }

  SelectItem parse_select_item() {
    SelectItem item;
    const std::size_t p = peek().position;
    if (peek().is_symbol("*")) {
      advance();
      item.expr = make_expr(ExprKind::kStar, p);
      return item;
    }
    item.expr = parse_expr();
    item.alias = parse_optional_alias();
    return item;
  }

  std::string parse_optional_alias() {
    if (accept_word("as")) {
      if (peek().kind == TokenKind::kString) return advance().text;
      return expect_identifier("alias");
    }
    if (at_identifier()) return advance().lower;
    return {};
  }

  // --- FROM ----------------------------------------------------------------

  std::unique_ptr<TableRef> parse_table_ref() {
    auto left = parse_table_primary();
    for (;;) {
      const std::size_t p = peek().position;
      bool natural = accept_word("natural");
      std::string type;
      if (accept_word("inner")) {
        type = "inner";
      } else if (accept_word("left")) {
        accept_word("outer");
        type = "left";
      } else if (accept_word("right")) {
        accept_word("outer");
        type = "right";
      } else if (accept_word("full")) {
        accept_word("outer");
        type = "full";
      } else if (accept_word("cross")) {
        type = "cross";
      }
      if (!peek().is_word("join")) {
        if (natural || !type.empty()) fail("expected JOIN");
        break;
      }
      advance();
      if (type.empty()) type = "inner";
      auto join = std::make_unique<TableRef>();
      join->kind = TableRefKind::kJoin;
      join->position = p;
      join->join_type = type;
      join->natural = natural;
      join->left = std::move(left);
      join->right = parse_table_primary();
      if (type != "cross" && !natural) {
        if (accept_word("on")) {
          join->on = parse_expr();
        } else if (accept_word("using")) {
          expect_symbol("(");
          do {
            join->using_columns.push_back(expect_identifier("column name"));
          } while (accept_symbol(","));
          expect_symbol(")");
        } else {
          fail("expected ON or USING");
        }
      }
      left = std::move(join);
    }
    return left;
  }

  std::unique_ptr<TableRef> parse_table_primary() {
    auto ref = std::make_unique<TableRef>();
    ref->position = peek().position;
    accept_word("lateral");
    if (accept_symbol("(")) {
      if (starts_query() || peek().is_symbol("(")) {
        std::size_t depth = 0;
        while (peek(depth).is_symbol("(")) ++depth;
        if (peek(depth).is_word("select") || peek(depth).is_word("with")) {
          ref->kind = TableRefKind::kDerived;
          ref->subquery = parse_query();
          expect_symbol(")");
          ref->alias = parse_optional_alias();
          if (!ref->alias.empty() && accept_symbol("(")) {
            do {
              ref->column_aliases.push_back(expect_identifier("column alias"));
            } while (accept_symbol(","));
            expect_symbol(")");
          }
          return ref;
        }
      }
      auto inner = parse_table_ref();
      expect_symbol(")");
      return inner;
    }
    ref->kind = TableRefKind::kTable;
    ref->name = expect_identifier("table name");
    while (accept_symbol(".")) ref->name = expect_identifier("table name");
    ref->alias = parse_optional_alias();
    return ref;
  }

  // --- expressions ---------------------------------------------------------

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr binary(std::string op, ExprPtr l, ExprPtr r, std::size_t p) {
    auto e = make_expr(ExprKind::kBinary, p);
    e->op = std::move(op);
    e->args.push_back(std::move(l));
    e->args.push_back(std::move(r));
    return e;
  }

  ExprPtr parse_or() {
    auto left = parse_and();
    while (peek().is_word("or")) {
      const std::size_t p = advance().position;
      left = binary("or", std::move(left), parse_and(), p);
    }
    return left;
  }

  ExprPtr parse_and() {
    auto left = parse_not();
    while (peek().is_word("and")) {
      const std::size_t p = advance().position;
      left = binary("and", std::move(left), parse_not(), p);
    }
    return left;
  }

  ExprPtr parse_not() {
    if (peek().is_word("not") && !peek(1).is_word("exists")) {
      const std::size_t p = advance().position;
      auto e = make_expr(ExprKind::kUnary, p);
      e->op = "not";
      e->args.push_back(parse_not());
      return e;
    }
    return parse_predicate();
  }

  ExprPtr parse_predicate() {
    auto left = parse_additive();
    for (;;) {
      const Token& t = peek();
      const std::size_t p = t.position;
      if (t.kind == TokenKind::kSymbol && is_comparison(t.text)) {
        std::string op = advance().text;
        if (op == "!=") op = "<>";
        ExprPtr right;
        if (peek().is_word("any") || peek().is_word("all") || peek().is_word("some")) {
          std::string quant = advance().lower;
          expect_symbol("(");
          right = make_expr(ExprKind::kSubquery, peek().position);
          right->op = quant;
          right->subquery = parse_query();
          expect_symbol(")");
        } else {
          right = parse_additive();
        }
        left = binary(op, std::move(left), std::move(right), p);
        continue;
      }
      if (t.is_word("is")) {
        advance();
        bool neg = accept_word("not");
        if (accept_word("null")) {
          auto e = make_expr(ExprKind::kIsNull, p);
          e->negated = neg;
          e->args.push_back(std::move(left));
          left = std::move(e);
        } else if (peek().is_word("true") || peek().is_word("false")) {
          auto e = make_expr(ExprKind::kIsBool, p);
          e->negated = neg;
          e->name = advance().lower;
          e->args.push_back(std::move(left));
          left = std::move(e);
        } else if (accept_word("distinct")) {
          expect_word("from");
          left = binary(neg ? "=" : "<>", std::move(left), parse_additive(), p);
        } else {
          fail("expected NULL, TRUE, FALSE or DISTINCT FROM after IS");
        }
        continue;
      }
      bool neg = false;
      if (t.is_word("not") && (peek(1).is_word("in") || peek(1).is_word("between") ||
                               peek(1).is_word("like") || peek(1).is_word("ilike"))) {
        advance();
        neg = true;
      }
      if (accept_word("in")) {
        auto e = make_expr(ExprKind::kIn, p);
        e->negated = neg;
        e->args.push_back(std::move(left));
        expect_symbol("(");
        if (starts_query()) {
          e->subquery = parse_query();
        } else {
          do {
            e->args.push_back(parse_expr());
          } while (accept_symbol(","));
        }
        expect_symbol(")");
        left = std::move(e);
        continue;
      }
      if (accept_word("between")) {
        auto e = make_expr(ExprKind::kBetween, p);
        e->negated = neg;
        accept_word("symmetric");
        e->args.push_back(std::move(left));
        e->args.push_back(parse_additive());
        expect_word("and");
        e->args.push_back(parse_additive());
        left = std::move(e);
        continue;
      }
      if (peek().is_word("like") || peek().is_word("ilike")) {
        auto e = make_expr(ExprKind::kLike, p);
        e->op = advance().lower;
        e->negated = neg;
        e->args.push_back(std::move(left));
        e->args.push_back(parse_additive());
        if (accept_word("escape")) e->args.push_back(parse_additive());
        left = std::move(e);
        continue;
      }
      if (neg) fail("expected IN, BETWEEN or LIKE after NOT");
      break;
    }
    return left;
  }

  ExprPtr parse_additive() {
    auto left = parse_multiplicative();
    for (;;) {
      const Token& t = peek();
      if (t.is_symbol("+") || t.is_symbol("-") || t.is_symbol("||")) {
        const std::size_t p = t.position;
        std::string op = advance().text;
        left = binary(op, std::move(left), parse_multiplicative(), p);
        continue;
      }
      break;
    }
    return left;
  }

  ExprPtr parse_multiplicative() {
    auto left = parse_unary();
    for (;;) {
      const Token& t = peek();
      if (t.is_symbol("*") || t.is_symbol("/") || t.is_symbol("%")) {
        const std::size_t p = t.position;
        std::string op = advance().text;
        left = binary(op, std::move(left), parse_unary(), p);
        continue;
      }
      break;
    }
    return left;
  }

  ExprPtr parse_unary() {
    if (peek().is_symbol("-") || peek().is_symbol("+")) {
      const Token& t = advance();
      auto operand = parse_unary();
      if (operand->kind == ExprKind::kLiteral && operand->literal_kind == LiteralKind::kNumber &&
          t.text == "-" && operand->literal.front() != '-') {
        operand->literal = "-" + operand->literal;
        operand->position = t.position;
        return operand;
      }
      auto e = make_expr(ExprKind::kUnary, t.position);
      e->op = t.text;
      e->args.push_back(std::move(operand));
      return e;
    }
    auto e = parse_primary();
    while (peek().is_symbol("::")) {
      const std::size_t p = advance().position;
      auto cast = make_expr(ExprKind::kCast, p);
      cast->op = "cast";
      cast->name = parse_type_name();
      cast->args.push_back(std::move(e));
      e = std::move(cast);
    }
    return e;
  }

  std::string parse_type_name() {
    if (peek().kind != TokenKind::kIdentifier) fail("expected type name");
    std::string name = advance().lower;
    if ((name == "double" && accept_word("precision")) ||
        ((name == "character" || name == "char") && accept_word("varying"))) {
      name += name == "double" ? " precision" : " varying";
    }
    if (accept_symbol("(")) {
      name += "(";
      bool first = true;
      do {
        if (peek().kind != TokenKind::kNumber) fail("expected type argument");
        if (!first) name += ",";
        name += advance().text;
        first = false;
      } while (accept_symbol(","));
      expect_symbol(")");
      name += ")";
    }
    return name;
  }

  ExprPtr literal(LiteralKind kind, std::string text, std::size_t p) {
    auto e = make_expr(ExprKind::kLiteral, p);
    e->literal_kind = kind;
    e->literal = std::move(text);
    return e;
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    const std::size_t p = t.position;
    switch (t.kind) {
      case TokenKind::kNumber:
        return literal(LiteralKind::kNumber, advance().text, p);
      case TokenKind::kString:
        return literal(LiteralKind::kString, advance().text, p);
      case TokenKind::kQuotedIdentifier:
        return parse_column_ref();
      case TokenKind::kSymbol:
        if (t.text == "(") return parse_parenthesized();
        fail("expected expression");
      case TokenKind::kEnd:
        fail("expected expression");
      case TokenKind::kIdentifier:
        break;
    }

    const std::string& w = t.lower;
    if (w == "null") {
      advance();
      return literal(LiteralKind::kNull, "null", p);
    }
    if (w == "true" || w == "false") {
      advance();
      return literal(LiteralKind::kBoolean, w, p);
    }
    if ((w == "date" || w == "timestamp" || w == "time") &&
        peek(1).kind == TokenKind::kString) {
      const bool is_date = w == "date";
      advance();
      return literal(is_date ? LiteralKind::kDate : LiteralKind::kTimestamp, advance().text, p);
    }
    if (w == "interval" && (peek(1).kind == TokenKind::kString || peek(1).kind == TokenKind::kNumber)) {
      advance();
      std::string text = advance().text;
      if (peek().kind == TokenKind::kIdentifier && !is_reserved_word(peek().lower)) {
        text += " " + advance().lower;
        if (accept_word("to")) text += " to " + expect_identifier("interval unit");
      }
      return literal(LiteralKind::kInterval, text, p);
    }
    if (w == "case") return parse_case();
    if (w == "cast" && peek(1).is_symbol("(")) {
      advance();
      advance();
      auto e = make_expr(ExprKind::kCast, p);
      e->op = "cast";
      e->args.push_back(parse_expr());
      expect_word("as");
      e->name = parse_type_name();
      expect_symbol(")");
      return e;
    }
    if (w == "extract" && peek(1).is_symbol("(")) {
      advance();
      advance();
      auto e = make_expr(ExprKind::kFunction, p);
      e->op = "extract";
      if (peek().kind != TokenKind::kIdentifier && peek().kind != TokenKind::kString)
        fail("expected date part");
      e->args.push_back(literal(LiteralKind::kString, advance().lower, peek().position));
      expect_word("from");
      e->args.push_back(parse_expr());
      expect_symbol(")");
      return e;
    }
    if (w == "exists" || (w == "not" && peek(1).is_word("exists"))) {
      auto e = make_expr(ExprKind::kExists, p);
      if (w == "not") {
        advance();
        e->negated = true;
      }
      advance();
      expect_symbol("(");
      e->subquery = parse_query();
      expect_symbol(")");
      return e;
    }
    if ((w == "current_date" || w == "current_timestamp" || w == "current_time") &&
        !peek(1).is_symbol("(")) {
      advance();
      auto e = make_expr(ExprKind::kFunction, p);
      e->op = w;
      return e;
    }
    if (peek(1).is_symbol("(") && !is_reserved_word(w)) return parse_function();
    if (is_reserved_word(w)) fail("expected expression");
    return parse_column_ref();
  }

  ExprPtr parse_parenthesized() {
    const std::size_t p = advance().position;  // '('
    if (starts_query()) {
      auto e = make_expr(ExprKind::kSubquery, p);
      e->subquery = parse_query();
      expect_symbol(")");
      return e;
    }
    auto first = parse_expr();
    if (accept_symbol(",")) {
      auto row = make_expr(ExprKind::kFunction, p);
      row->op = "row";
      row->args.push_back(std::move(first));
      do {
        row->args.push_back(parse_expr());
      } while (accept_symbol(","));
      expect_symbol(")");
      return row;
    }
    expect_symbol(")");
    return first;
  }

  ExprPtr parse_case() {
    auto e = make_expr(ExprKind::kCase, advance().position);
    e->op = "case";
    if (!peek().is_word("when")) {
      e->has_case_operand = true;
      e->args.push_back(parse_expr());
    }
    if (!peek().is_word("when")) fail("expected WHEN");
    while (accept_word("when")) {
      e->args.push_back(parse_expr());
      expect_word("then");
      e->args.push_back(parse_expr());
    }
    if (accept_word("else")) {
      e->has_else = true;
      e->args.push_back(parse_expr());
    }
    expect_word("end");
    return e;
  }

  ExprPtr parse_function() {
    const Token& name_tok = advance();
    auto e = make_expr(ExprKind::kFunction, name_tok.position);
    e->op = name_tok.lower;
    expect_symbol("(");
    if (accept_symbol("*")) {
      e->star_arg = true;
    } else if (!peek().is_symbol(")")) {
      if (accept_word("distinct")) e->distinct = true;
      else accept_word("all");
      if ((e->op == "substring" || e->op == "substr") ) {
        e->args.push_back(parse_expr());
        if (accept_word("from")) {
          e->args.push_back(parse_expr());
          if (accept_word("for")) e->args.push_back(parse_expr());
        } else {
          while (accept_symbol(",")) e->args.push_back(parse_expr());
        }
      } else if (e->op == "position") {
        e->args.push_back(parse_additive());
        expect_word("in");
        e->args.push_back(parse_expr());
      } else if (e->op == "trim") {
        if (peek().is_word("leading") || peek().is_word("trailing") || peek().is_word("both"))
          advance();
        if (!accept_word("from")) {
          e->args.push_back(parse_expr());
          if (accept_word("from")) e->args.push_back(parse_expr());
        } else {
          e->args.push_back(parse_expr());
        }
      } else {
        do {
          e->args.push_back(parse_expr());
        } while (accept_symbol(","));
      }
      if (accept_word("order")) {  // string_agg(x, ',' ORDER BY y)
        expect_word("by");
        parse_order_items();
      }
    }
    expect_symbol(")");
    if (peek().is_word("within")) {
      advance();
      expect_word("group");
      expect_symbol("(");
      expect_word("order");
      expect_word("by");
      parse_order_items();
      expect_symbol(")");
    }
    if (accept_word("filter")) {
      expect_symbol("(");
      expect_word("where");
      e->filter = parse_expr();
      expect_symbol(")");
    }
    if (accept_word("over")) e->over = parse_window_spec();
    return e;
  }

  std::unique_ptr<WindowSpec> parse_window_spec() {
    auto w = std::make_unique<WindowSpec>();
    if (at_identifier()) {  // named window
      w->frame = advance().lower;
      return w;
    }
    expect_symbol("(");
    if (accept_word("partition")) {
      expect_word("by");
      do {
        w->partition_by.push_back(parse_expr());
      } while (accept_symbol(","));
    }
    if (accept_word("order")) {
      expect_word("by");
      w->order_by = parse_order_items();
    }
    if (peek().is_word("rows") || peek().is_word("range") || peek().is_word("groups")) {
      int depth = 0;
      while (!(depth == 0 && peek().is_symbol(")"))) {
        if (peek().kind == TokenKind::kEnd) fail("unterminated window frame");
        if (peek().is_symbol("(")) ++depth;
        if (peek().is_symbol(")")) --depth;
        if (!w->frame.empty()) w->frame += ' ';
        w->frame += advance().lower;
      }
    }
    expect_symbol(")");
    return w;
  }

  ExprPtr parse_column_ref() {
    const std::size_t p = peek().position;
    std::vector<std::string> parts;
    parts.push_back(advance().lower);
    while (peek().is_symbol(".")) {
      advance();
      if (peek().is_symbol("*")) {
        advance();
        auto star = make_expr(ExprKind::kStar, p);
        star->qualifier = parts.back();
        return star;
      }
      if (peek().kind != TokenKind::kIdentifier && peek().kind != TokenKind::kQuotedIdentifier)
        fail("expected column name");
      parts.push_back(advance().lower);
    }
    auto e = make_expr(ExprKind::kColumn, p);
    e->name = parts.back();
    if (parts.size() >= 2) e->qualifier = parts[parts.size() - 2];
    return e;
  }

  std::vector<OrderItem> parse_order_items() {
    std::vector<OrderItem> items;
    do {
      OrderItem item;
      item.expr = parse_expr();
      if (accept_word("desc")) item.descending = true;
      else accept_word("asc");
      if (accept_word("nulls")) {
        if (!accept_word("first")) expect_word("last");
      }
      items.push_back(std::move(item));
    } while (accept_symbol(","));
    return items;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

bool is_reserved_word(std::string_view lower_word) {
  return std::find(std::begin(kReserved), std::end(kReserved), lower_word) != std::end(kReserved);
}

std::unique_ptr<Query> parse_query(std::string_view sql) {
  Parser parser(tokenize(sql));
  return parser.parse_statement();
}

}  // namespace querygen::sql
