#include <chrono>
#include <functional>
#include <thread>

#include <nlohmann/json.hpp>

#include "querygen/error.h"
#include "querygen/execution.h"
#include "querygen/http_client.h"

namespace querygen {

PrestoDriver::PrestoDriver(std::string base_url, std::string catalog, std::string schema,
                           std::string user)
    : base_url_(std::move(base_url)),
      catalog_(std::move(catalog)),
      schema_(std::move(schema)),
      user_(std::move(user)) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
  parse_url(base_url_);
}

void PrestoDriver::connect() {
  HttpResponse r;
  try {
    r = http_get(base_url_ + "/v1/info", {}, 10'000);
  } catch (const ConnectionError& e) {
    throw ConnectionError("presto coordinator unreachable: " + std::string(e.what()));
  }
  if (r.status != 200)
    throw ConnectionError("presto coordinator answered HTTP " + std::to_string(r.status));
}

StatementResult PrestoDriver::execute(const std::string& sql, double timeout_ms) {
  using clock = std::chrono::steady_clock;
  const auto deadline = clock::now() + std::chrono::microseconds(static_cast<long long>(timeout_ms * 1000));
  const Headers headers = {{"X-Presto-User", user_},    {"X-Presto-Catalog", catalog_},
                           {"X-Presto-Schema", schema_}, {"X-Trino-User", user_},
                           {"X-Trino-Catalog", catalog_}, {"X-Trino-Schema", schema_}};
  std::function<int()> remaining_ms = [&] {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()).count();
    return static_cast<int>(std::max<long long>(left, 1));
  };

  StatementResult result;
  std::string next;
  try {
    return poll(sql, headers, deadline, remaining_ms, next);
  } catch (const ConnectionError&) {
    if (clock::now() < deadline) throw;
    cancel(next, headers);
    result.timed_out = true;
    return result;
  }
}

void PrestoDriver::cancel(const std::string& next_uri, const Headers& headers) {
  if (next_uri.empty()) return;
  try {
    http_delete(next_uri, headers, 5'000);
  } catch (const ConnectionError&) {
  }
}

StatementResult PrestoDriver::poll(const std::string& sql, const Headers& headers,
                                   std::chrono::steady_clock::time_point deadline,
                                   const std::function<int()>& remaining_ms, std::string& next) {
  using clock = std::chrono::steady_clock;
  StatementResult result;
  HttpResponse r = http_post(base_url_ + "/v1/statement", sql, "text/plain", headers, remaining_ms());
  for (int polls = 0;; ++polls) {
    if (r.status != 200) {
      result.error = "HTTP " + std::to_string(r.status);
      return result;
    }
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(r.body);
    } catch (const nlohmann::json::exception& e) {
      result.error = std::string("malformed response: ") + e.what();
      return result;
    }
    if (doc.contains("data")) result.rows += doc.at("data").size();
    if (doc.contains("error") && !doc.at("error").is_null()) {
      const auto& err = doc.at("error");
      result.error = err.value("message", std::string("query failed"));
      return result;
    }
    if (!doc.contains("nextUri") || doc.at("nextUri").is_null()) return result;
    next = doc.at("nextUri").get<std::string>();
    if (clock::now() >= deadline) {
      cancel(next, headers);
      result.timed_out = true;
      return result;
    }
    if (!doc.contains("data") && polls > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(std::min(polls, 50)));
    r = http_get(next, headers, remaining_ms());
  }
}

}  // namespace querygen
