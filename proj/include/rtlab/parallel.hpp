#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace rtlab {

namespace detail {
inline std::atomic<unsigned>& thread_override() {
  static std::atomic<unsigned> value{0};
  return value;
}
}  // namespace detail

/// Caps the number of worker threads used by the library. 0 restores the
/// default (RT_LAB_THREADS, else hardware concurrency).
inline void set_thread_count(unsigned threads) { detail::thread_override() = threads; }

inline unsigned thread_count() {
  if (unsigned t = detail::thread_override().load(); t != 0) return t;
  if (const char* env = std::getenv("RT_LAB_THREADS"); env != nullptr) {
    try {
      int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, n). Work is split into contiguous blocks; the
/// body must only write to state owned by index i so results never depend on
/// the number of workers.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  constexpr std::size_t kGrain = 16;
  auto run = [&] {
    try {
      for (;;) {
        std::size_t begin = next.fetch_add(kGrain);
        if (begin >= n) return;
        std::size_t end = std::min(n, begin + kGrain);
        for (std::size_t i = begin; i < end; ++i) body(i);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace rtlab
