#pragma once

#include <map>
#include <string>

namespace querygen {

struct HttpResponse {
  int status = 0;
  std::string body;
};

struct Url {
  std::string scheme;  // http | https
  std::string host;
  int port = 0;
  std::string path;    // starts with '/'

  std::string origin() const;  // scheme://host:port
};

// Throws ConfigError for anything but http(s)://host[:port][/path].
Url parse_url(const std::string& url);

using Headers = std::map<std::string, std::string>;

// Blocking requests. Transport failures throw ConnectionError; any HTTP
// status is returned as-is.
HttpResponse http_post(const std::string& url, const std::string& body,
                       const std::string& content_type, const Headers& headers,
                       int timeout_ms);
HttpResponse http_get(const std::string& url, const Headers& headers, int timeout_ms);
HttpResponse http_delete(const std::string& url, const Headers& headers, int timeout_ms);

}  // namespace querygen
