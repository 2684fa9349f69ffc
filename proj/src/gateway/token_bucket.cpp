#include "cskd/gateway/token_bucket.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace cskd {

TokenBucket::TokenBucket(double rate, double burst)
    : unlimited_(!(rate > 0.0) || std::isinf(rate)),
      rate_(rate),
      capacity_(std::max(1.0, burst)),
      tokens_(std::max(1.0, burst)),
      last_(Clock::now()) {}

void TokenBucket::acquire() {
  if (unlimited_) return;
  std::chrono::duration<double> wait{0.0};
  {
    std::lock_guard<std::mutex> lock(mu_);
    const auto now = Clock::now();
    const std::chrono::duration<double> elapsed = now - last_;
    last_ = now;
    tokens_ = std::min(capacity_, tokens_ + elapsed.count() * rate_);
    tokens_ -= 1.0;
    if (tokens_ < 0.0) wait = std::chrono::duration<double>(-tokens_ / rate_);
  }
  if (wait.count() > 0.0) std::this_thread::sleep_for(wait);
}

}  // namespace cskd
