#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace polyxt {

namespace detail {
inline std::atomic<unsigned> &thread_setting() {
  static std::atomic<unsigned> value{1};
  return value;
}
} // namespace detail

/// Worker count used by the data-parallel loops below. 0 means "hardware
/// concurrency". Results never depend on this value.
inline void set_threads(unsigned count) { detail::thread_setting() = count; }

inline unsigned threads() {
  const unsigned t = detail::thread_setting();
  if (t == 0)
    return std::max(1U, std::thread::hardware_concurrency());
  return t;
}

/// Runs body(i) for i in [0, count). Indices are split into contiguous
/// static chunks, so every index is processed exactly once by one worker and
/// any per-index output is identical to a serial run. The first exception
/// thrown by a worker is rethrown on the calling thread.
template <class Body> void parallel_for(std::size_t count, Body &&body) {
  const std::size_t workers = std::min<std::size_t>(threads(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i)
          body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto &t : pool)
    t.join();
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);
}

} // namespace polyxt
