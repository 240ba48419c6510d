#include "querygen/http_client.h"

#include <regex>

#include <httplib.h>

#include "querygen/error.h"

namespace querygen {

std::string Url::origin() const { return scheme + "://" + host + ":" + std::to_string(port); }

Url parse_url(const std::string& url) {
  static const std::regex kUrl(R"(^(https?)://([^/:]+)(?::(\d+))?(/.*)?$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(url, m, kUrl)) throw ConfigError("invalid URL '" + url + "'");
  Url u;
  u.scheme = m[1].str();
  for (auto& c : u.scheme) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  u.host = m[2].str();
  u.port = m[3].matched ? std::stoi(m[3].str()) : (u.scheme == "https" ? 443 : 80);
  u.path = m[4].matched ? m[4].str() : "/";
  return u;
}

namespace {

httplib::Client make_client(const Url& u, int timeout_ms) {
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (u.scheme == "https") throw ConnectionError("built without TLS support; cannot reach " + u.origin());
#endif
  httplib::Client client(u.origin());
  const auto secs = timeout_ms / 1000;
  const auto usecs = (timeout_ms % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  return client;
}

httplib::Headers to_headers(const Headers& h) {
  httplib::Headers out;
  for (const auto& [k, v] : h) out.emplace(k, v);
  return out;
}

HttpResponse finish(const httplib::Result& r, const Url& u) {
  if (!r) throw ConnectionError("request to " + u.origin() + u.path + " failed: " + httplib::to_string(r.error()));
  return {r->status, r->body};
}

}  // namespace

HttpResponse http_post(const std::string& url, const std::string& body,
                       const std::string& content_type, const Headers& headers, int timeout_ms) {
  const Url u = parse_url(url);
  auto client = make_client(u, timeout_ms);
  return finish(client.Post(u.path, to_headers(headers), body, content_type), u);
}

HttpResponse http_get(const std::string& url, const Headers& headers, int timeout_ms) {
  const Url u = parse_url(url);
  auto client = make_client(u, timeout_ms);
  return finish(client.Get(u.path, to_headers(headers)), u);
}

HttpResponse http_delete(const std::string& url, const Headers& headers, int timeout_ms) {
  const Url u = parse_url(url);
  auto client = make_client(u, timeout_ms);
  return finish(client.Delete(u.path, to_headers(headers)), u);
}

}  // namespace querygen
