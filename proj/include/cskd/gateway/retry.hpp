#pragma once

#include <chrono>
#include <functional>

namespace cskd {

// Exponential backoff without jitter: delay(k) = min(initial * multiplier^k,
// max_delay), so successive delays never decrease.
struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_delay{250};
  std::chrono::milliseconds max_delay{10'000};
  double multiplier = 2.0;

  // Delay before retry number `retry` (0 = first retry).
  std::chrono::milliseconds delay_for(int retry) const;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

Sleeper real_sleeper();

// HTTP status classification shared by generation and scoring clients.
// 0 stands for a transport failure (no response).
bool is_retryable_status(int status);

}  // namespace cskd
