#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cskd/gateway/gen_params.hpp"
#include "cskd/gateway/http.hpp"

namespace cskd {

enum class AttemptStatus { kOk, kRetryable, kPermanent };

// Outcome of a single call to a backend.
struct AttemptResult {
  AttemptStatus status = AttemptStatus::kOk;
  int http_status = 200;
  std::string message;
  std::vector<std::string> completions;

  static AttemptResult ok(std::vector<std::string> completions);
  static AttemptResult retryable(int http_status, std::string message);
  static AttemptResult permanent(int http_status, std::string message);
};

// A text generator. Implementations must be safe to call concurrently and
// must report failures through AttemptResult rather than throwing.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string id() const = 0;

  // One request for params.num_samples completions. A backend may return
  // fewer; the gateway fans out for the remainder.
  virtual AttemptResult complete(const std::string& prompt,
                                 const GenParams& params) = 0;
};

// Deterministic offline generator. Completion k of a request is drawn from
// the vocabulary by hashing (seed, prompt, k).
class MockBackend final : public Backend {
 public:
  using FaultFn =
      std::function<std::optional<AttemptResult>(const std::string&, std::size_t)>;

  struct Options {
    std::uint64_t seed = 0;
    std::vector<std::string> vocabulary;
    // Completion k = vocabulary[(h + k) mod |V|] with h = hash(seed, prompt):
    // distinct samples whenever num_samples <= |V|.
    bool distinct_samples = false;
    // Simulated per-call latency, for concurrency instrumentation.
    std::chrono::milliseconds latency{0};
    // Fault injection: return a non-ok result to make a call fail. Receives
    // the prompt and the 0-based index of this call to complete().
    FaultFn fault;
  };

  // Throws cskd::Error on an empty vocabulary.
  explicit MockBackend(Options options);

  std::string id() const override;
  AttemptResult complete(const std::string& prompt,
                         const GenParams& params) override;

  std::size_t calls() const { return calls_.load(); }
  int peak_in_flight() const { return peak_.load(); }
  const std::vector<std::string>& vocabulary() const { return options_.vocabulary; }

 private:
  Options options_;
  std::atomic<std::size_t> calls_{0};
  std::atomic<int> in_flight_{0};
  std::atomic<int> peak_{0};
};

// Client for the chat-completion wire protocol:
//   POST {"model","messages":[{"role":"user","content":prompt}],
//         "temperature","max_tokens","n"[,"top_k"]}
//   -> {"choices":[{"message":{"content":...}}, ...]}
class RemoteBackend final : public Backend {
 public:
  struct Options {
    Endpoint endpoint;
    std::string auth_token;  // sent as "Authorization: Bearer <token>" when set
    std::string model;
    std::chrono::milliseconds timeout{60'000};
  };

  explicit RemoteBackend(Options options);

  std::string id() const override;
  AttemptResult complete(const std::string& prompt,
                         const GenParams& params) override;

  // Exposed for protocol tests.
  static std::string request_body(const std::string& model,
                                  const std::string& prompt,
                                  const GenParams& params);
  static AttemptResult parse_response(int status, const std::string& body);

 private:
  Options options_;
};

inline constexpr const char* kDefaultAuthEnvVar = "CSKD_API_KEY";
inline constexpr const char* kDefaultChatPath = "/v1/chat/completions";

struct RemoteSpec {
  std::string endpoint;  // full URL; a bare origin gets kDefaultChatPath
  std::string auth_env_var = kDefaultAuthEnvVar;
  std::string model_name;
  std::chrono::milliseconds timeout{60'000};
};

struct MockSpec {
  std::uint64_t seed = 0;
  std::vector<std::string> vocabulary;
  bool distinct_samples = false;
};

using BackendSpec = std::variant<RemoteSpec, MockSpec>;

// Validates the spec (endpoint syntax, non-empty vocabulary) but does not
// contact the remote. Throws cskd::Error.
std::shared_ptr<Backend> configure_backend(const BackendSpec& spec);

}  // namespace cskd
