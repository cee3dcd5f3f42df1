#pragma once

#include <thread>
#include <vector>

namespace crifem {

/// Runs fn(i) for i in [0,n) split into contiguous chunks, one per thread.
/// Each index is processed exactly once; results written to disjoint slots
/// stay deterministic for any thread count.
template <class F>
void parallel_for(int n, int threads, F&& fn) {
  if (threads <= 1 || n < 2 * threads) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace crifem
