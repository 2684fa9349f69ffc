#include "cskd/gateway/gateway.hpp"

#include "cskd/core/error.hpp"
#include "cskd/gateway/parallel.hpp"
#include "cskd/gateway/token_bucket.hpp"

namespace cskd {

std::string_view to_string(FailureKind k) {
  switch (k) {
    case FailureKind::kRetriesExhausted:
      return "retries_exhausted";
    case FailureKind::kPermanent:
      return "permanent";
    case FailureKind::kInvalidRequest:
      return "invalid_request";
  }
  return "unknown";
}

Gateway::Gateway(std::shared_ptr<Backend> backend, GatewayOptions options)
    : backend_(std::move(backend)), options_(std::move(options)) {
  if (!backend_) throw Error("gateway needs a backend");
  if (options_.retry.max_attempts < 1) throw Error("retry cap must be >= 1");
  if (!options_.sleep) options_.sleep = real_sleeper();
}

GenerationResult Gateway::generate(const std::string& prompt_id,
                                   const std::string& prompt,
                                   const GenParams& params) const {
  return run({prompt_id, prompt, params}, nullptr);
}

GenerationResult Gateway::run(const GenerationRequest& request,
                              TokenBucket* limiter) const {
  const auto started = std::chrono::steady_clock::now();
  GenerationResult result;
  result.prompt_id = request.prompt_id;
  result.backend_id = backend_->id();

  auto finish = [&]() -> GenerationResult {
    result.latency = std::chrono::steady_clock::now() - started;
    return std::move(result);
  };

  if (auto err = request.params.validation_error(); !err.empty()) {
    result.failure = GenerationFailure{FailureKind::kInvalidRequest, 0, err};
    return finish();
  }

  const auto wanted = static_cast<std::size_t>(request.params.num_samples);
  // Client-side fan-out: keep asking for the remainder until the backend
  // has produced num_samples completions.
  while (result.completions.size() < wanted) {
    GenParams sub = request.params;
    sub.num_samples = static_cast<int>(wanted - result.completions.size());
    AttemptResult attempt;
    for (int tries = 0;; ++tries) {
      if (limiter != nullptr) limiter->acquire();
      ++result.attempt_count;
      attempt = backend_->complete(request.prompt, sub);
      if (attempt.status != AttemptStatus::kRetryable) break;
      if (tries + 1 >= options_.retry.max_attempts) {
        result.failure = GenerationFailure{FailureKind::kRetriesExhausted,
                                           attempt.http_status, attempt.message};
        result.completions.clear();
        return finish();
      }
      const auto delay = options_.retry.delay_for(tries);
      result.retry_delays.push_back(delay);
      options_.sleep(delay);
    }
    if (attempt.status == AttemptStatus::kPermanent) {
      result.failure = GenerationFailure{FailureKind::kPermanent,
                                         attempt.http_status, attempt.message};
      result.completions.clear();
      return finish();
    }
    if (attempt.completions.empty()) {
      result.failure = GenerationFailure{FailureKind::kPermanent,
                                         attempt.http_status,
                                         "backend returned no completions"};
      return finish();
    }
    for (auto& c : attempt.completions) {
      if (result.completions.size() == wanted) break;
      result.completions.push_back(std::move(c));
    }
  }
  return finish();
}

std::vector<GenerationResult> Gateway::generate_batch(
    std::span<const GenerationRequest> requests, std::size_t max_in_flight,
    double rate) const {
  if (max_in_flight < 1) throw Error("max_in_flight must be >= 1");
  TokenBucket limiter(rate);
  std::vector<GenerationResult> results(requests.size());
  parallel_for(requests.size(), max_in_flight, [&](std::size_t i) {
    results[i] = run(requests[i], limiter.unlimited() ? nullptr : &limiter);
  });
  return results;
}

}  // namespace cskd
