#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "querygen/error.h"
#include "querygen/execution.h"
#include "querygen/http_client.h"
#include "querygen/llm.h"

namespace querygen {
namespace {

// httplib server on an ephemeral port, stopped on destruction.
class FakeServer {
 public:
  httplib::Server server;

  void start() {
    port_ = server.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~FakeServer() {
    server.stop();
    if (thread_.joinable()) thread_.join();
  }
  std::string url(const std::string& path = "") const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

 private:
  int port_ = 0;
  std::thread thread_;
};

TEST(Url, Parsing) {
  auto u = parse_url("http://example.com:8080/v1/x");
  EXPECT_EQ(u.scheme, "http");
  EXPECT_EQ(u.host, "example.com");
  EXPECT_EQ(u.port, 8080);
  EXPECT_EQ(u.path, "/v1/x");
  EXPECT_EQ(u.origin(), "http://example.com:8080");
  u = parse_url("https://h");
  EXPECT_EQ(u.port, 443);
  EXPECT_EQ(u.path, "/");
  EXPECT_THROW(parse_url("ftp://h"), ConfigError);
  EXPECT_THROW(parse_url("http://"), ConfigError);
  EXPECT_THROW(parse_url("http://h:notaport/"), ConfigError);
}

TEST(HttpClient, RoundTripsAndConnectionErrors) {
  FakeServer s;
  s.server.Post("/echo", [](const httplib::Request& req, httplib::Response& res) {
    res.status = 201;
    res.set_content(req.body + "|" + req.get_header_value("X-A"), "text/plain");
  });
  s.start();
  const auto r = http_post(s.url("/echo"), "hi", "text/plain", {{"X-A", "b"}}, 2000);
  EXPECT_EQ(r.status, 201);
  EXPECT_EQ(r.body, "hi|b");
  EXPECT_EQ(http_get(s.url("/missing"), {}, 2000).status, 404);
  EXPECT_THROW(http_get("http://127.0.0.1:1/", {}, 500), ConnectionError);
}

TEST(Presto, FollowsNextUriAndCountsRows) {
  FakeServer s;
  std::string seen_sql, seen_user;
  s.server.Get("/v1/info", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"starting":false})", "application/json");
  });
  s.server.Post("/v1/statement", [&](const httplib::Request& req, httplib::Response& res) {
    seen_sql = req.body;
    seen_user = req.get_header_value("X-Presto-User");
    res.set_content(nlohmann::json{{"id", "q1"}, {"nextUri", s.url("/v1/q/1")}}.dump(), "application/json");
  });
  s.server.Get("/v1/q/1", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content(nlohmann::json{{"data", {{1}, {2}}}, {"nextUri", s.url("/v1/q/2")}}.dump(), "application/json");
  });
  s.server.Get("/v1/q/2", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content(nlohmann::json{{"data", {{3}}}}.dump(), "application/json");
  });
  s.start();
  PrestoDriver d(s.url("/"), "tpch", "tiny", "alice");
  d.connect();
  const auto r = d.execute("SELECT 1", 5000);
  EXPECT_EQ(r.rows, 3u);
  EXPECT_FALSE(r.timed_out);
  EXPECT_FALSE(r.error);
  EXPECT_EQ(seen_sql, "SELECT 1");
  EXPECT_EQ(seen_user, "alice");
}

TEST(Presto, ErrorsAndTimeoutCancel) {
  FakeServer s;
  std::atomic<int> deletes{0};
  s.server.Post("/v1/statement", [&](const httplib::Request& req, httplib::Response& res) {
    if (req.body == "bad") {
      res.set_content(R"({"error":{"message":"line 1:1: mismatched input"}})", "application/json");
      return;
    }
    if (req.body == "500") {
      res.status = 500;
      return;
    }
    res.set_content(nlohmann::json{{"nextUri", s.url("/v1/q/loop")}}.dump(), "application/json");
  });
  s.server.Get("/v1/q/loop", [&](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    res.set_content(nlohmann::json{{"nextUri", s.url("/v1/q/loop")}}.dump(), "application/json");
  });
  s.server.Delete("/v1/q/loop", [&](const httplib::Request&, httplib::Response& res) {
    ++deletes;
    res.status = 204;
  });
  s.start();
  PrestoDriver d(s.url(), "c", "s", "u");
  EXPECT_EQ(d.execute("bad", 2000).error, "line 1:1: mismatched input");
  EXPECT_EQ(d.execute("500", 2000).error, "HTTP 500");
  const auto r = d.execute("forever", 100);
  EXPECT_TRUE(r.timed_out);
  EXPECT_EQ(deletes.load(), 1);
  // No /v1/info handler: connect fails up front.
  EXPECT_THROW(d.connect(), ConnectionError);
  EXPECT_THROW(PrestoDriver("http://127.0.0.1:1", "c", "s", "u").connect(), ConnectionError);
}

TEST(HttpBackendTest, CompletionsAndChatStyles) {
  FakeServer s;
  nlohmann::json last;
  std::string auth;
  std::mutex m;
  s.server.Post("/v1/completions", [&](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard<std::mutex> lock(m);
    last = nlohmann::json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.set_content(R"({"choices":[{"text":"SELECT 1"},{"text":"SELECT 2"}]})", "application/json");
  });
  s.server.Post("/v1/chat", [&](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard<std::mutex> lock(m);
    last = nlohmann::json::parse(req.body);
    res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"SELECT 3"}}]})", "application/json");
  });
  s.start();

  ::setenv("QUERYGEN_TEST_KEY", "sekret", 1);
  HttpBackendConfig c;
  c.url = s.url("/v1/completions");
  c.model = "m1";
  c.api_key_env = "QUERYGEN_TEST_KEY";
  HttpBackend backend(c);
  GenParams p;
  p.n_completions = 3;
  p.temperature = 0.5;
  const auto r = backend.generate("PROMPT", p);
  EXPECT_EQ(r.completions, (std::vector<std::string>{"SELECT 1", "SELECT 2"}));
  EXPECT_EQ(r.failures.size(), 1u);
  EXPECT_EQ(last.at("prompt"), "PROMPT");
  EXPECT_EQ(last.at("model"), "m1");
  EXPECT_EQ(last.at("n"), 3);
  EXPECT_EQ(last.at("temperature"), 0.5);
  EXPECT_EQ(last.at("repetition_penalty"), 1.05);
  EXPECT_EQ(auth, "Bearer sekret");
  EXPECT_EQ(backend.model_name(), "m1");

  c.url = s.url("/v1/chat");
  c.style = "chat";
  HttpBackend chat(c);
  p.n_completions = 1;
  EXPECT_EQ(chat.generate("HELLO", p).completions, (std::vector<std::string>{"SELECT 3"}));
  EXPECT_EQ(last.at("messages")[0].at("content"), "HELLO");

  c.style = "telepathy";
  EXPECT_THROW(HttpBackend{c}, ConfigError);
}

TEST(HttpBackendTest, StatusCodesMapToRetryability) {
  FakeServer s;
  s.server.Post("/429", [](const httplib::Request&, httplib::Response& res) { res.status = 429; });
  s.server.Post("/503", [](const httplib::Request&, httplib::Response& res) { res.status = 503; });
  s.server.Post("/400", [](const httplib::Request&, httplib::Response& res) { res.status = 400; });
  s.server.Post("/junk", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("not json", "text/plain");
  });
  s.start();
  auto attempt = [&](const std::string& url) -> std::pair<int, bool> {
    HttpBackendConfig c;
    c.url = url;
    c.timeout_ms = 1000;
    try {
      HttpBackend(c).generate("p", {});
    } catch (const BackendError& e) {
      return {e.status(), e.retryable()};
    }
    return {-1, false};
  };
  EXPECT_EQ(attempt(s.url("/429")), std::make_pair(429, true));
  EXPECT_EQ(attempt(s.url("/503")), std::make_pair(503, true));
  EXPECT_EQ(attempt(s.url("/400")), std::make_pair(400, false));
  EXPECT_EQ(attempt(s.url("/junk")), std::make_pair(200, false));
  EXPECT_EQ(attempt("http://127.0.0.1:1/x"), std::make_pair(0, true));
}

}  // namespace
}  // namespace querygen
