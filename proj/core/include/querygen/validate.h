#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "querygen/catalog.h"
#include "querygen/sql/ast.h"
#include "querygen/subschema.h"

namespace querygen {

struct QueryRecord;

enum class RejectReason {
  kSyntax,
  kUnknownObject,
  kLabelArithmetic,
  kEnumLiteralViolation,
  kDuplicate,
  kUsesWrongTables,
};

std::string_view to_string(RejectReason reason);
RejectReason reject_reason_from_string(std::string_view code);

struct ValidationReport {
  std::string query_id;
  std::vector<RejectReason> rejection_reasons;  // empty iff accepted
  std::string normalized_form;
  std::string detail;  // first human-readable problem, if any

  bool accepted() const { return rejection_reasons.empty(); }
  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

nlohmann::ordered_json to_json(const ValidationReport& report);
ValidationReport validation_report_from_json(const nlohmann::json& j);

// Parses one SELECT statement; throws SyntaxError.
std::unique_ptr<sql::Query> validate_syntax(std::string_view sql);

struct RelevanceOptions {
  // false: referenced tables must be a subset of the subschema;
  // true: they must equal it.
  bool require_all_subschema_tables = false;
};

// Rule codes for a parsed query, each at most once, in this order:
// unknown_object, label_arithmetic, enum_literal_violation, uses_wrong_tables.
// `detail` (optional) receives a description of the first violation.
std::vector<RejectReason> validate_relevance(const sql::Query& query, const SchemaCatalog& catalog,
                                             const Subschema* subschema = nullptr,
                                             const RelevanceOptions& options = {},
                                             std::string* detail = nullptr);

// Syntax + relevance in one step. Never throws for bad SQL.
ValidationReport validate_query(std::string_view sql, const SchemaCatalog& catalog,
                                const Subschema* subschema = nullptr,
                                const RelevanceOptions& options = {});

// Seen-set over normalized forms. Not thread-safe.
class Deduplicator {
 public:
  explicit Deduplicator(bool literal_placeholders = true)
      : literal_placeholders_(literal_placeholders) {}

  std::string key(std::string_view sql) const;
  // True when the query's normalized form was not seen before.
  bool insert(std::string_view sql);
  bool contains(std::string_view sql) const;
  std::size_t size() const { return seen_.size(); }

 private:
  bool literal_placeholders_;
  std::unordered_set<std::string> seen_;
};

// First occurrence per normalized form is kept; later ones are returned in
// `second` with a duplicate rejection reason appended. Order is preserved.
std::pair<std::vector<QueryRecord>, std::vector<QueryRecord>> deduplicate(
    std::vector<QueryRecord> records, bool literal_placeholders = true);

}  // namespace querygen
