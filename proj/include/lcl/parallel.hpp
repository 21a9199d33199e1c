// Minimal fork-join loop over an index range.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lcl {

/// Worker count for a request of `threads` (<= 0 means hardware parallelism).
inline int resolve_threads(int threads) {
  if (threads > 0) return threads;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is visited exactly once;
/// callers write results into preallocated slots so the outcome does not depend on scheduling.
/// The first exception thrown by any body is rethrown after all workers stop.
template <typename Body>
void parallel_for(std::ptrdiff_t n, int threads, Body&& body) {
  const int workers = static_cast<int>(std::min<std::ptrdiff_t>(resolve_threads(threads), std::max<std::ptrdiff_t>(n, 1)));
  if (workers <= 1) {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::ptrdiff_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (std::ptrdiff_t i = next++; i < n && !failed; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace lcl
