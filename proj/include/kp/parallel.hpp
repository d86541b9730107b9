#pragma once

#include <cstddef>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

namespace kp {

/// Worker count from KP_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned default_workers();

/// Calls fn(i) for i in [0, n) over `workers` threads with a static
/// partition. If any call throws, the exception from the smallest index is
/// rethrown after all workers have joined, so failures are deterministic.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  if (workers == 0) workers = default_workers();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t threads = std::min<std::size_t>(workers, n);
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::size_t> failed_at(threads, std::numeric_limits<std::size_t>::max());
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        const std::size_t begin = n * t / threads;
        const std::size_t end = n * (t + 1) / threads;
        for (std::size_t i = begin; i < end; ++i) {
          try {
            fn(i);
          } catch (...) {
            errors[t] = std::current_exception();
            failed_at[t] = i;
            return;
          }
        }
      });
    }
  }
  std::size_t first = threads;
  for (std::size_t t = 0; t < threads; ++t) {
    if (errors[t] && (first == threads || failed_at[t] < failed_at[first])) first = t;
  }
  if (first != threads) std::rethrow_exception(errors[first]);
}

}  // namespace kp
