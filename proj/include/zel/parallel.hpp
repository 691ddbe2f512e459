#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace zel {
namespace parallel {

inline unsigned& thread_count_ref() {
  static unsigned n = 0;  // 0 = decide lazily
  return n;
}

inline void set_threads(unsigned n) { thread_count_ref() = n; }

inline unsigned threads() {
  unsigned n = thread_count_ref();
  if (n > 0) return n;
  if (const char* env = std::getenv("ZEL_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return (unsigned)v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Static block partition of [0, n).  Results must be written per-index by
// the body; reductions happen afterwards in index order so the outcome is
// identical for any thread count.
template <typename F>
void for_each_index(std::size_t n, F&& body, unsigned nthreads = 0) {
  if (n == 0) return;
  unsigned tc = nthreads > 0 ? nthreads : threads();
  if (tc <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  if (tc > n) tc = (unsigned)n;
  std::vector<std::thread> pool;
  pool.reserve(tc);
  std::size_t chunk = (n + tc - 1) / tc;
  for (unsigned t = 0; t < tc; ++t) {
    std::size_t lo = t * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace parallel
}  // namespace zel
