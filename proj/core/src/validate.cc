#include "querygen/validate.h"

#include <algorithm>
#include <charconv>
#include <set>

#include "querygen/error.h"
#include "querygen/record.h"
#include "querygen/sql/analyzer.h"
#include "querygen/sql/normalize.h"
#include "querygen/sql/parser.h"
#include "querygen/sql/walk.h"

namespace querygen {

namespace {

constexpr std::pair<RejectReason, std::string_view> kReasonNames[] = {
    {RejectReason::kSyntax, "syntax"},
    {RejectReason::kUnknownObject, "unknown_object"},
    {RejectReason::kLabelArithmetic, "label_arithmetic"},
    {RejectReason::kEnumLiteralViolation, "enum_literal_violation"},
    {RejectReason::kDuplicate, "duplicate"},
    {RejectReason::kUsesWrongTables, "uses_wrong_tables"},
};

bool is_arithmetic(const sql::Expr& e) {
  if (e.kind == sql::ExprKind::kBinary)
    return e.op == "+" || e.op == "-" || e.op == "*" || e.op == "/" || e.op == "%";
  if (e.kind == sql::ExprKind::kUnary) return e.op == "-" || e.op == "+";
  if (e.kind == sql::ExprKind::kFunction) return e.op == "sum" || e.op == "avg";
  return false;
}

const sql::Expr* strip_casts(const sql::Expr* e) {
  while (e && (e->kind == sql::ExprKind::kCast ||
               (e->kind == sql::ExprKind::kUnary && e->op == "+")) &&
         !e->args.empty())
    e = e->args.front().get();
  return e;
}

bool same_literal(const std::string& literal, sql::LiteralKind kind, const std::string& value) {
  if (literal == value) return true;
  if (kind != sql::LiteralKind::kNumber) return false;
  double a = 0, b = 0;
  auto ra = std::from_chars(literal.data(), literal.data() + literal.size(), a);
  auto rb = std::from_chars(value.data(), value.data() + value.size(), b);
  return ra.ec == std::errc() && rb.ec == std::errc() &&
         ra.ptr == literal.data() + literal.size() && rb.ptr == value.data() + value.size() &&
         a == b;
}

class RuleChecker : public sql::Visitor {
 public:
  RuleChecker(const sql::Analysis& analysis, const SchemaCatalog& catalog)
      : analysis_(analysis), catalog_(catalog) {}

  void on_expr(const sql::Expr& e) override {
    if (is_arithmetic(e)) {
      for (const auto& arg : e.args) {
        const ColumnDef* c = column(strip_casts(arg.get()));
        if (c && c->metadata.is_label) note(label_arithmetic, "arithmetic on label column " + c->name);
      }
    }
    if (e.kind == sql::ExprKind::kBinary && (e.op == "=" || e.op == "<>")) {
      check_enum(e.args[0].get(), e.args[1].get());
      check_enum(e.args[1].get(), e.args[0].get());
    }
    if (e.kind == sql::ExprKind::kIn && !e.subquery) {
      for (std::size_t i = 1; i < e.args.size(); ++i) check_enum(e.args[0].get(), e.args[i].get());
    }
  }

  bool label_arithmetic = false;
  bool enum_violation = false;
  std::string detail;

 private:
  const ColumnDef* column(const sql::Expr* e) const {
    if (!e || e->kind != sql::ExprKind::kColumn) return nullptr;
    return analysis_.base_column(e, catalog_);
  }

  void check_enum(const sql::Expr* col_side, const sql::Expr* value_side) {
    const ColumnDef* c = column(strip_casts(col_side));
    if (!c || !c->metadata.enumerated_values) return;
    value_side = strip_casts(value_side);
    if (!value_side || value_side->kind != sql::ExprKind::kLiteral) return;
    if (value_side->literal_kind == sql::LiteralKind::kNull) return;
    const auto& values = *c->metadata.enumerated_values;
    const bool ok = std::any_of(values.begin(), values.end(), [&](const std::string& v) {
      return same_literal(value_side->literal, value_side->literal_kind, v);
    });
    if (!ok) note(enum_violation, "literal '" + value_side->literal + "' is not a value of " + c->name);
  }

  void note(bool& flag, std::string message) {
    if (detail.empty()) detail = std::move(message);
    flag = true;
  }

  const sql::Analysis& analysis_;
  const SchemaCatalog& catalog_;
};

}  // namespace

std::string_view to_string(RejectReason reason) {
  for (const auto& [r, name] : kReasonNames)
    if (r == reason) return name;
  return "syntax";
}

RejectReason reject_reason_from_string(std::string_view code) {
  for (const auto& [r, name] : kReasonNames)
    if (name == code) return r;
  throw FormatError("unknown rejection code '" + std::string(code) + "'");
}

nlohmann::ordered_json to_json(const ValidationReport& report) {
  nlohmann::ordered_json j;
  j["query_id"] = report.query_id;
  j["verdict"] = report.accepted() ? "accepted" : "rejected";
  auto reasons = nlohmann::ordered_json::array();
  for (auto r : report.rejection_reasons) reasons.push_back(std::string(to_string(r)));
  j["rejection_reasons"] = std::move(reasons);
  j["normalized_form"] = report.normalized_form;
  if (!report.detail.empty()) j["detail"] = report.detail;
  return j;
}

ValidationReport validation_report_from_json(const nlohmann::json& j) {
  ValidationReport r;
  r.query_id = j.value("query_id", std::string{});
  for (const auto& code : j.value("rejection_reasons", nlohmann::json::array()))
    r.rejection_reasons.push_back(reject_reason_from_string(code.get<std::string>()));
  r.normalized_form = j.value("normalized_form", std::string{});
  r.detail = j.value("detail", std::string{});
  return r;
}

std::unique_ptr<sql::Query> validate_syntax(std::string_view sql) { return sql::parse_query(sql); }

std::vector<RejectReason> validate_relevance(const sql::Query& query, const SchemaCatalog& catalog,
                                             const Subschema* subschema,
                                             const RelevanceOptions& options,
                                             std::string* detail) {
  std::vector<RejectReason> reasons;
  std::string first;
  const auto analysis = sql::analyze(query, catalog);
  if (!analysis.issues.empty()) {
    reasons.push_back(RejectReason::kUnknownObject);
    const auto& issue = analysis.issues.front();
    first = (issue.kind == sql::IssueKind::kAmbiguousColumn ? "ambiguous column '"
                                                             : "unresolved name '") +
            issue.subject + "'";
  }

  RuleChecker checker(analysis, catalog);
  sql::walk(query, checker);
  if (checker.label_arithmetic) reasons.push_back(RejectReason::kLabelArithmetic);
  if (checker.enum_violation) reasons.push_back(RejectReason::kEnumLiteralViolation);
  if (first.empty()) first = checker.detail;

  if (subschema) {
    const std::set<std::string> allowed(subschema->tables.begin(), subschema->tables.end());
    const std::set<std::string> used(analysis.table_uses.begin(), analysis.table_uses.end());
    bool wrong = !std::includes(allowed.begin(), allowed.end(), used.begin(), used.end());
    if (options.require_all_subschema_tables && used != allowed) wrong = true;
    if (wrong) {
      reasons.push_back(RejectReason::kUsesWrongTables);
      if (first.empty()) first = "tables outside the subschema";
    }
  }
  if (detail) *detail = first;
  return reasons;
}

ValidationReport validate_query(std::string_view sql, const SchemaCatalog& catalog,
                                const Subschema* subschema, const RelevanceOptions& options) {
  ValidationReport report;
  report.query_id = sql::query_id(sql);
  report.normalized_form = sql::normalize_sql(sql, true);
  std::unique_ptr<sql::Query> tree;
  try {
    tree = validate_syntax(sql);
  } catch (const SyntaxError& e) {
    report.rejection_reasons.push_back(RejectReason::kSyntax);
    report.detail = e.what();
    return report;
  }
  report.rejection_reasons = validate_relevance(*tree, catalog, subschema, options, &report.detail);
  return report;
}

std::string Deduplicator::key(std::string_view sql) const {
  return sql::normalize_sql(sql, literal_placeholders_);
}

bool Deduplicator::insert(std::string_view sql) { return seen_.insert(key(sql)).second; }

bool Deduplicator::contains(std::string_view sql) const { return seen_.count(key(sql)) > 0; }

std::pair<std::vector<QueryRecord>, std::vector<QueryRecord>> deduplicate(
    std::vector<QueryRecord> records, bool literal_placeholders) {
  Deduplicator seen(literal_placeholders);
  std::vector<QueryRecord> kept, dropped;
  for (auto& r : records) {
    if (seen.insert(r.sql)) {
      kept.push_back(std::move(r));
      continue;
    }
    if (!r.validation) {
      r.validation = ValidationReport{};
      r.validation->query_id = r.id;
      r.validation->normalized_form = seen.key(r.sql);
    }
    r.validation->rejection_reasons.push_back(RejectReason::kDuplicate);
    dropped.push_back(std::move(r));
  }
  return {std::move(kept), std::move(dropped)};
}

}  // namespace querygen
