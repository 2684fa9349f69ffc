#pragma once

#include <cstddef>
#include <functional>

namespace cskd {

// Runs fn(0..n-1) on at most `max_workers` threads, each worker handling
// one index at a time. The first exception thrown by fn is rethrown after
// all workers finish. max_workers <= 1 runs inline on the caller's thread.
void parallel_for(std::size_t n, std::size_t max_workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace cskd
