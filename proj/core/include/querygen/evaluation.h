#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "querygen/execution.h"

namespace querygen {

// max(pred/truth, truth/pred). Throws DomainError unless both are > 0.
double q_error(double pred, double truth);

// Linear interpolation between closest ranks (Hyndman-Fan type 7):
// h = (n-1)p, result = x[floor h] + (h - floor h)(x[floor h + 1] - x[floor h]).
// Throws EmptyInputError for an empty input.
double percentile(std::vector<double> values, double p);

struct PredictionMatrix {
  std::vector<std::string> engines;
  std::vector<std::string> queries;
  // [query][engine]
  std::vector<std::vector<double>> pred;
  std::vector<std::vector<double>> truth;

  // Throws DomainError / FormatError when the shape or values are invalid.
  void validate() const;
};

struct PredictionRow {
  std::string query_id;
  std::string engine_id;
  double predicted_ms = 0;
  double true_ms = 0;
};

// Engines and queries ordered by first appearance. Throws FormatError for
// missing or repeated cells and DomainError for non-positive durations.
PredictionMatrix matrix_from_rows(const std::vector<PredictionRow>& rows);

// CSV with header query_id,engine_id,predicted_ms,true_ms, or JSONL with the
// same keys (selected by the .jsonl extension).
std::vector<PredictionRow> load_prediction_rows(const std::string& path);

enum class CensorPolicy { kUseTimeout, kExclude };

// Replaces true_ms with measured labels. Errored labels drop the query;
// timed-out labels use runtime = timeout or drop the query per policy.
PredictionMatrix matrix_from_labels(const std::vector<PredictionRow>& predictions,
                                    const std::vector<RuntimeLabel>& labels,
                                    CensorPolicy policy);

struct QErrorStats {
  double median = 1;
  double mean = 1;
  double p95 = 1;
};

struct QErrorSummary {
  QErrorStats overall;  // mean over engines of the per-engine statistics
  std::vector<std::pair<std::string, QErrorStats>> per_engine;
};

// Throws EmptyInputError when there are no queries or engines.
QErrorSummary summarize(const PredictionMatrix& matrix);

struct RoutingResult {
  std::vector<std::pair<std::string, std::string>> assignments;  // query, engine
  double total_routed_time = 0;
  double oracle_time = 0;
  double regret = 0;
};

// Argmin of predicted time, ties to the earlier engine.
RoutingResult route(const PredictionMatrix& matrix);

// (a.total - b.total) / a.total. Throws MismatchError when the query sets
// differ and DomainError when a.total is zero.
double compare_routing(const RoutingResult& a, const RoutingResult& b);

nlohmann::ordered_json to_json(const QErrorSummary& s);
nlohmann::ordered_json to_json(const RoutingResult& r);

// Rows = sources, columns = median / mean / p95.
std::string format_summary_table(const std::vector<std::pair<std::string, QErrorSummary>>& rows);
// Rows = sources, columns = engines (median q-error per engine).
std::string format_engine_table(const std::vector<std::pair<std::string, QErrorSummary>>& rows);

}  // namespace querygen
