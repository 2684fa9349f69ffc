#include "cskd/gateway/http.hpp"

#include <regex>

#ifdef CSKD_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "cskd/core/error.hpp"

namespace cskd {

std::string Endpoint::origin() const {
  return scheme + "://" + host + ":" + std::to_string(port);
}

std::string Endpoint::url() const { return origin() + path; }

Endpoint parse_endpoint(std::string_view url) {
  static const std::regex re(R"(^(https?)://([A-Za-z0-9._\-]+|\[[0-9A-Fa-f:]+\])(?::([0-9]{1,5}))?(/[^\s]*)?$)");
  std::cmatch m;
  if (!std::regex_match(url.begin(), url.end(), m, re)) {
    throw Error("malformed endpoint '" + std::string(url) + "'");
  }
  Endpoint ep;
  ep.scheme = m[1].str();
  ep.host = m[2].str();
  ep.port = m[3].matched ? std::stoi(m[3].str()) : (ep.scheme == "https" ? 443 : 80);
  if (ep.port < 1 || ep.port > 65535) {
    throw Error("endpoint port out of range in '" + std::string(url) + "'");
  }
  ep.path = m[4].matched ? m[4].str() : "/";
#ifndef CSKD_HAVE_OPENSSL
  if (ep.scheme == "https") {
    throw Error("https endpoint requested but built without OpenSSL");
  }
#endif
  return ep;
}

HttpResponse post_json(const Endpoint& endpoint, const std::string& path,
                       const std::string& body, const Headers& headers,
                       std::chrono::milliseconds timeout) {
  httplib::Client client(endpoint.origin());
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);
  HttpResponse out;
  auto res = client.Post(path, h, body, "application/json");
  if (!res) {
    out.error = httplib::to_string(res.error());
    return out;
  }
  out.status = res->status;
  out.body = res->body;
  return out;
}

}  // namespace cskd
