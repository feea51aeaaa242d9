#pragma once
#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace emdra::util {

// Runs fn(0..n-1) across up to nthreads workers. The callable must not
// throw; callers store per-index results (or errors) into preallocated
// slots, which keeps merging deterministic regardless of schedule.
inline void parallel_for(long n, unsigned nthreads, const std::function<void(long)>& fn) {
  if (n <= 0) return;
  unsigned workers = nthreads == 0 ? 1 : nthreads;
  if (static_cast<long>(workers) > n) workers = static_cast<unsigned>(n);
  if (workers == 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        long i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

inline unsigned default_thread_count() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

}  // namespace emdra::util
