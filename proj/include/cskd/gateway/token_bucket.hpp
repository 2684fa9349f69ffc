#pragma once

#include <chrono>
#include <mutex>

namespace cskd {

// Token bucket admitting `rate` acquisitions per second with bursts of up
// to `burst`. A non-positive or infinite rate admits everything.
class TokenBucket {
 public:
  TokenBucket(double rate, double burst = 1.0);

  // Blocks until a token is available. Callers reserve a slot under the
  // lock and sleep outside it, so concurrent waiters are served in turn.
  void acquire();

  bool unlimited() const { return unlimited_; }

 private:
  using Clock = std::chrono::steady_clock;

  const bool unlimited_;
  const double rate_;
  const double capacity_;
  std::mutex mu_;
  double tokens_;
  Clock::time_point last_;
};

}  // namespace cskd
