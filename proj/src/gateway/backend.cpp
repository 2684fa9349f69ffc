#include "cskd/gateway/backend.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include <json.hpp>

#include "cskd/core/error.hpp"
#include "cskd/core/hash.hpp"
#include "cskd/gateway/retry.hpp"

namespace cskd {

AttemptResult AttemptResult::ok(std::vector<std::string> completions) {
  return {AttemptStatus::kOk, 200, "", std::move(completions)};
}

AttemptResult AttemptResult::retryable(int http_status, std::string message) {
  return {AttemptStatus::kRetryable, http_status, std::move(message), {}};
}

AttemptResult AttemptResult::permanent(int http_status, std::string message) {
  return {AttemptStatus::kPermanent, http_status, std::move(message), {}};
}

MockBackend::MockBackend(Options options) : options_(std::move(options)) {
  if (options_.vocabulary.empty()) throw Error("mock backend needs a vocabulary");
}

std::string MockBackend::id() const {
  return "mock:" + std::to_string(options_.seed);
}

AttemptResult MockBackend::complete(const std::string& prompt,
                                    const GenParams& params) {
  const std::size_t call = calls_++;
  const int now = ++in_flight_;
  int peak = peak_.load();
  while (now > peak && !peak_.compare_exchange_weak(peak, now)) {
  }
  struct Leave {
    std::atomic<int>& n;
    ~Leave() { --n; }
  } leave{in_flight_};

  if (options_.latency.count() > 0) std::this_thread::sleep_for(options_.latency);
  if (options_.fault) {
    if (auto injected = options_.fault(prompt, call)) return *injected;
  }

  const std::uint64_t base = hash_combine(mix64(options_.seed), fnv1a64(prompt));
  const std::size_t v = options_.vocabulary.size();
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(params.num_samples));
  for (int k = 0; k < params.num_samples; ++k) {
    const std::size_t idx =
        options_.distinct_samples
            ? (base + static_cast<std::uint64_t>(k)) % v
            : hash_combine(base, static_cast<std::uint64_t>(k)) % v;
    out.push_back(options_.vocabulary[idx]);
  }
  return AttemptResult::ok(std::move(out));
}

RemoteBackend::RemoteBackend(Options options) : options_(std::move(options)) {}

std::string RemoteBackend::id() const {
  return "remote:" + options_.model + "@" + options_.endpoint.url();
}

std::string RemoteBackend::request_body(const std::string& model,
                                        const std::string& prompt,
                                        const GenParams& params) {
  nlohmann::ordered_json j;
  j["model"] = model;
  j["messages"] = nlohmann::ordered_json::array(
      {{{"role", "user"}, {"content", prompt}}});
  j["temperature"] = params.temperature;
  j["max_tokens"] = params.max_new_tokens;
  j["n"] = params.num_samples;
  if (params.top_k) j["top_k"] = *params.top_k;
  return j.dump();
}

AttemptResult RemoteBackend::parse_response(int status,
                                            const std::string& body) {
  if (status < 200 || status >= 300) {
    std::string msg = "HTTP " + std::to_string(status);
    if (!body.empty()) msg += ": " + body.substr(0, 200);
    return is_retryable_status(status) ? AttemptResult::retryable(status, msg)
                                       : AttemptResult::permanent(status, msg);
  }
  try {
    const auto j = nlohmann::json::parse(body);
    const auto& choices = j.at("choices");
    if (!choices.is_array()) throw Error("'choices' is not an array");
    std::vector<std::string> out;
    for (const auto& c : choices) {
      out.push_back(c.at("message").at("content").get<std::string>());
    }
    return AttemptResult::ok(std::move(out));
  } catch (const std::exception& e) {
    return AttemptResult::permanent(
        status, std::string("malformed chat-completion response: ") + e.what());
  }
}

AttemptResult RemoteBackend::complete(const std::string& prompt,
                                      const GenParams& params) {
  Headers headers;
  if (!options_.auth_token.empty()) {
    headers.emplace_back("Authorization", "Bearer " + options_.auth_token);
  }
  const HttpResponse res =
      post_json(options_.endpoint, options_.endpoint.path,
                request_body(options_.model, prompt, params), headers,
                options_.timeout);
  if (res.status == 0) return AttemptResult::retryable(0, res.error);
  return parse_response(res.status, res.body);
}

std::shared_ptr<Backend> configure_backend(const BackendSpec& spec) {
  if (const auto* mock = std::get_if<MockSpec>(&spec)) {
    MockBackend::Options o;
    o.seed = mock->seed;
    o.vocabulary = mock->vocabulary;
    o.distinct_samples = mock->distinct_samples;
    return std::make_shared<MockBackend>(std::move(o));
  }
  const auto& remote = std::get<RemoteSpec>(spec);
  if (remote.endpoint.empty()) throw Error("remote backend needs an endpoint");
  RemoteBackend::Options o;
  o.endpoint = parse_endpoint(remote.endpoint);
  if (o.endpoint.path == "/") o.endpoint.path = kDefaultChatPath;
  o.model = remote.model_name;
  o.timeout = remote.timeout;
  if (!remote.auth_env_var.empty()) {
    if (const char* token = std::getenv(remote.auth_env_var.c_str())) {
      o.auth_token = token;
    }
  }
  return std::make_shared<RemoteBackend>(std::move(o));
}

}  // namespace cskd
