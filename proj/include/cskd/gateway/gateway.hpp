#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cskd/gateway/backend.hpp"
#include "cskd/gateway/gen_params.hpp"
#include "cskd/gateway/retry.hpp"

namespace cskd {

class TokenBucket;

enum class FailureKind {
  kRetriesExhausted,  // every attempt hit a retryable error
  kPermanent,         // non-retryable status or protocol violation
  kInvalidRequest,    // GenParams failed validation; nothing was sent
};

std::string_view to_string(FailureKind k);

struct GenerationFailure {
  FailureKind kind = FailureKind::kPermanent;
  int last_status = 0;
  std::string message;
};

struct GenerationRequest {
  std::string prompt_id;
  std::string prompt;
  GenParams params;
};

struct GenerationResult {
  std::string prompt_id;
  std::vector<std::string> completions;  // num_samples entries on success
  std::string backend_id;
  std::chrono::nanoseconds latency{0};
  int attempt_count = 0;
  std::vector<std::chrono::milliseconds> retry_delays;
  std::optional<GenerationFailure> failure;

  bool ok() const { return !failure.has_value(); }
};

struct GatewayOptions {
  RetryPolicy retry;
  Sleeper sleep = real_sleeper();
};

// Uniform generation front-end over one backend.
class Gateway {
 public:
  explicit Gateway(std::shared_ptr<Backend> backend, GatewayOptions options = {});

  GenerationResult generate(const std::string& prompt_id,
                            const std::string& prompt,
                            const GenParams& params) const;

  // Runs every request with at most `max_in_flight` outstanding and at most
  // `rate` backend calls per second (<= 0 for unlimited). Results come back
  // in input order; failures are reported per request.
  std::vector<GenerationResult> generate_batch(
      std::span<const GenerationRequest> requests, std::size_t max_in_flight,
      double rate) const;

  const Backend& backend() const { return *backend_; }
  std::string backend_id() const { return backend_->id(); }

 private:
  GenerationResult run(const GenerationRequest& request,
                       TokenBucket* limiter) const;

  std::shared_ptr<Backend> backend_;
  GatewayOptions options_;
};

}  // namespace cskd
