#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace pskk {

namespace detail {

inline int initial_thread_count() {
  if (const char* env = std::getenv("PSKK_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

inline std::atomic<int>& thread_count_storage() {
  static std::atomic<int> count{initial_thread_count()};
  return count;
}

}  // namespace detail

inline int thread_count() { return detail::thread_count_storage().load(); }

inline void set_thread_count(int n) { detail::thread_count_storage().store(std::max(1, n)); }

//! Runs fn(chunk, begin, end) over `n_chunks` contiguous chunks of [0, n).
//! Chunk boundaries depend only on (n, n_chunks), never on the worker count,
//! so per-chunk partial results can be reduced in a fixed order.
inline void parallel_for_chunks(std::size_t n, std::size_t n_chunks,
                                const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  n_chunks = std::min(n_chunks, n);
  const std::size_t base = n / n_chunks;
  const std::size_t rem = n % n_chunks;
  auto bounds = [&](std::size_t c) {
    std::size_t begin = c * base + std::min(c, rem);
    std::size_t end = begin + base + (c < rem ? 1 : 0);
    return std::pair{begin, end};
  };

  const int workers = std::min<int>(thread_count(), static_cast<int>(n_chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) {
      auto [b, e] = bounds(c);
      fn(c, b, e);
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      auto [b, e] = bounds(c);
      fn(c, b, e);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int i = 1; i < workers; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

//! Convenience wrapper: partitions [0, n) into one chunk per worker.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  parallel_for_chunks(n, static_cast<std::size_t>(thread_count()),
                      [&](std::size_t, std::size_t b, std::size_t e) { fn(b, e); });
}

}  // namespace pskk
