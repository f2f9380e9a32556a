#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace cslab {

/// Worker count: hardware concurrency, capped by CSLAB_THREADS when set.
inline unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("CSLAB_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1)
        n = std::min<unsigned>(n, unsigned(cap));
    } catch (const std::exception &) {
      // unparsable value: keep the default
    }
  }
  return n;
}

/// Runs fn(i) for i in [0, count). Each index runs exactly once; the first
/// exception thrown by any worker is rethrown on the calling thread.
template <class Fn> void parallel_for(std::size_t count, Fn &&fn) {
  const unsigned workers =
      unsigned(std::min<std::size_t>(worker_count(), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count)
        return;
      try {
        fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error)
          error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w)
    pool.emplace_back(work);
  work();
  pool.clear();
  if (error)
    std::rethrow_exception(error);
}

} // namespace cslab
