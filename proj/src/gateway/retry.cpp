#include "cskd/gateway/retry.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace cskd {

std::chrono::milliseconds RetryPolicy::delay_for(int retry) const {
  const double scaled = static_cast<double>(initial_delay.count()) *
                        std::pow(multiplier, std::max(retry, 0));
  const double capped =
      std::min(scaled, static_cast<double>(max_delay.count()));
  return std::chrono::milliseconds(static_cast<long long>(capped));
}

Sleeper real_sleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

bool is_retryable_status(int status) {
  return status == 0 || status == 408 || status == 425 || status == 429 ||
         status >= 500;
}

}  // namespace cskd
