#include "querygen/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "internal/delimited.h"
#include "querygen/error.h"

namespace querygen {

double q_error(double pred, double truth) {
  if (!(pred > 0) || !(truth > 0))
    throw DomainError("q-error needs positive durations, got " + std::to_string(pred) + " and " +
                      std::to_string(truth));
  return std::max(pred / truth, truth / pred);
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw EmptyInputError("percentile of an empty set");
  if (p < 0 || p > 1) throw DomainError("percentile rank must be in [0,1]");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

void PredictionMatrix::validate() const {
  if (pred.size() != queries.size() || truth.size() != queries.size())
    throw FormatError("prediction matrix rows do not match the query list");
  for (std::size_t q = 0; q < queries.size(); ++q) {
    if (pred[q].size() != engines.size() || truth[q].size() != engines.size())
      throw FormatError("prediction matrix row for '" + queries[q] + "' is incomplete");
    for (std::size_t e = 0; e < engines.size(); ++e)
      if (!(pred[q][e] > 0) || !(truth[q][e] > 0))
        throw DomainError("non-positive duration for query '" + queries[q] + "' on engine '" +
                          engines[e] + "'");
  }
}

PredictionMatrix matrix_from_rows(const std::vector<PredictionRow>& rows) {
  PredictionMatrix m;
  std::map<std::string, std::size_t> qi, ei;
  for (const auto& r : rows) {
    if (qi.emplace(r.query_id, m.queries.size()).second) m.queries.push_back(r.query_id);
    if (ei.emplace(r.engine_id, m.engines.size()).second) m.engines.push_back(r.engine_id);
  }
  const double nan = std::nan("");
  m.pred.assign(m.queries.size(), std::vector<double>(m.engines.size(), nan));
  m.truth = m.pred;
  for (const auto& r : rows) {
    const auto q = qi[r.query_id], e = ei[r.engine_id];
    if (!std::isnan(m.pred[q][e]))
      throw FormatError("duplicate prediction for query '" + r.query_id + "' on engine '" +
                        r.engine_id + "'");
    m.pred[q][e] = r.predicted_ms;
    m.truth[q][e] = r.true_ms;
  }
  for (std::size_t q = 0; q < m.queries.size(); ++q)
    for (std::size_t e = 0; e < m.engines.size(); ++e)
      if (std::isnan(m.pred[q][e]))
        throw FormatError("missing prediction for query '" + m.queries[q] + "' on engine '" +
                          m.engines[e] + "'");
  m.validate();
  return m;
}

std::vector<PredictionRow> load_prediction_rows(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open predictions file '" + path + "'");
  std::vector<PredictionRow> rows;
  std::string line;
  auto number = [&](const std::string& s, std::size_t line_no) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": '" + s + "' is not a number");
    }
  };

  if (std::filesystem::path(path).extension() == ".jsonl") {
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      try {
        const auto j = nlohmann::json::parse(line);
        if (j.contains("schema_version") && !j.contains("query_id")) continue;  // header
        rows.push_back({j.at("query_id").get<std::string>(), j.at("engine_id").get<std::string>(),
                        j.at("predicted_ms").get<double>(), j.at("true_ms").get<double>()});
      } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    return rows;
  }

  if (!std::getline(in, line)) throw FormatError("predictions file '" + path + "' is empty");
  const auto header = internal::split_fields(line, ',', true);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* need : {"query_id", "engine_id", "predicted_ms", "true_ms"})
    if (!col.count(need))
      throw FormatError("predictions file '" + path + "' lacks column '" + need + "'");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = internal::split_fields(line, ',', true);
    if (f.size() < header.size())
      throw FormatError(path + ":" + std::to_string(line_no) + ": too few fields");
    rows.push_back({f[col["query_id"]], f[col["engine_id"]], number(f[col["predicted_ms"]], line_no),
                    number(f[col["true_ms"]], line_no)});
  }
  return rows;
}

PredictionMatrix matrix_from_labels(const std::vector<PredictionRow>& predictions,
                                    const std::vector<RuntimeLabel>& labels, CensorPolicy policy) {
  std::map<std::pair<std::string, std::string>, const RuntimeLabel*> by_key;
  for (const auto& l : labels) by_key[{l.query_id, l.engine_id}] = &l;
  std::set<std::string> excluded;
  for (const auto& p : predictions) {
    auto it = by_key.find({p.query_id, p.engine_id});
    if (it == by_key.end() || it->second->error ||
        (it->second->timed_out && policy == CensorPolicy::kExclude))
      excluded.insert(p.query_id);
  }
  std::vector<PredictionRow> rows;
  for (const auto& p : predictions) {
    if (excluded.count(p.query_id)) continue;
    PredictionRow r = p;
    r.true_ms = by_key.at({p.query_id, p.engine_id})->runtime_ms;
    rows.push_back(std::move(r));
  }
  return matrix_from_rows(rows);
}

namespace {

QErrorStats stats_of(const std::vector<double>& errors) {
  QErrorStats s;
  s.median = percentile(errors, 0.5);
  s.mean = std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(errors.size());
  s.p95 = percentile(errors, 0.95);
  return s;
}

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string render_table(const std::vector<std::string>& head,
                         const std::vector<std::vector<std::string>>& body) {
  std::vector<std::size_t> widths(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    widths[c] = head[c].size();
    for (const auto& row : body) widths[c] = std::max(widths[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out += "  ";
      out += pad(cells[c], widths[c]);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = line(head);
  std::vector<std::string> rule;
  for (auto w : widths) rule.push_back(std::string(w, '-'));
  out += line(rule);
  for (const auto& row : body) out += line(row);
  return out;
}

}  // namespace

QErrorSummary summarize(const PredictionMatrix& matrix) {
  matrix.validate();
  if (matrix.queries.empty() || matrix.engines.empty())
    throw EmptyInputError("prediction matrix has no queries or no engines");
  QErrorSummary s;
  s.overall = {0, 0, 0};
  for (std::size_t e = 0; e < matrix.engines.size(); ++e) {
    std::vector<double> errors;
    errors.reserve(matrix.queries.size());
    for (std::size_t q = 0; q < matrix.queries.size(); ++q)
      errors.push_back(q_error(matrix.pred[q][e], matrix.truth[q][e]));
    const auto st = stats_of(errors);
    s.per_engine.emplace_back(matrix.engines[e], st);
    s.overall.median += st.median;
    s.overall.mean += st.mean;
    s.overall.p95 += st.p95;
  }
  const double n = static_cast<double>(matrix.engines.size());
  s.overall.median /= n;
  s.overall.mean /= n;
  s.overall.p95 /= n;
  return s;
}

RoutingResult route(const PredictionMatrix& matrix) {
  matrix.validate();
  RoutingResult r;
  for (std::size_t q = 0; q < matrix.queries.size(); ++q) {
    std::size_t best = 0;
    for (std::size_t e = 1; e < matrix.engines.size(); ++e)
      if (matrix.pred[q][e] < matrix.pred[q][best]) best = e;
    r.assignments.emplace_back(matrix.queries[q], matrix.engines[best]);
    r.total_routed_time += matrix.truth[q][best];
    r.oracle_time += *std::min_element(matrix.truth[q].begin(), matrix.truth[q].end());
  }
  r.regret = r.total_routed_time - r.oracle_time;
  return r;
}

double compare_routing(const RoutingResult& a, const RoutingResult& b) {
  std::set<std::string> qa, qb;
  for (const auto& [q, e] : a.assignments) qa.insert(q);
  for (const auto& [q, e] : b.assignments) qb.insert(q);
  if (qa != qb) throw MismatchError("routing results cover different query sets");
  if (a.total_routed_time == 0) throw DomainError("baseline routed time is zero");
  return (a.total_routed_time - b.total_routed_time) / a.total_routed_time;
}

nlohmann::ordered_json to_json(const QErrorSummary& s) {
  nlohmann::ordered_json j;
  j["q_median"] = s.overall.median;
  j["q_mean"] = s.overall.mean;
  j["q_p95"] = s.overall.p95;
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& [engine, st] : s.per_engine)
    per[engine] = {{"median", st.median}, {"mean", st.mean}, {"p95", st.p95}};
  j["per_engine"] = std::move(per);
  return j;
}

nlohmann::ordered_json to_json(const RoutingResult& r) {
  nlohmann::ordered_json j;
  j["total_routed_time"] = r.total_routed_time;
  j["oracle_time"] = r.oracle_time;
  j["regret"] = r.regret;
  nlohmann::ordered_json a = nlohmann::ordered_json::object();
  for (const auto& [q, e] : r.assignments) a[q] = e;
  j["assignments"] = std::move(a);
  return j;
}

std::string format_summary_table(const std::vector<std::pair<std::string, QErrorSummary>>& rows) {
  std::vector<std::vector<std::string>> body;
  for (const auto& [name, s] : rows)
    body.push_back({name, fixed(s.overall.median), fixed(s.overall.mean), fixed(s.overall.p95)});
  return render_table({"source", "q_median", "q_mean", "q_p95"}, body);
}

std::string format_engine_table(const std::vector<std::pair<std::string, QErrorSummary>>& rows) {
  std::vector<std::string> head = {"source"};
  if (!rows.empty())
    for (const auto& [engine, st] : rows.front().second.per_engine) head.push_back(engine);
  std::vector<std::vector<std::string>> body;
  for (const auto& [name, s] : rows) {
    std::vector<std::string> row = {name};
    for (std::size_t i = 1; i < head.size(); ++i)
      row.push_back(i - 1 < s.per_engine.size() ? fixed(s.per_engine[i - 1].second.median) : "-");
    body.push_back(std::move(row));
  }
  return render_table(head, body);
}

}  // namespace querygen
