#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cskd {

struct Endpoint {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string path;    // always starts with '/'

  std::string origin() const;  // scheme://host:port
  std::string url() const;
};

// Accepts http(s)://host[:port][/path]. Throws cskd::Error otherwise.
Endpoint parse_endpoint(std::string_view url);

struct HttpResponse {
  int status = 0;       // 0 when no response was received
  std::string body;
  std::string error;    // transport error description when status == 0
};

using Headers = std::vector<std::pair<std::string, std::string>>;

// POSTs a JSON body. Never throws for network failures; they come back as
// status 0 with `error` set.
HttpResponse post_json(const Endpoint& endpoint, const std::string& path,
                       const std::string& body, const Headers& headers,
                       std::chrono::milliseconds timeout);

}  // namespace cskd
