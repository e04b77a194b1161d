#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace klsum {

// Runs fn(0), ..., fn(nblocks-1) on up to `workers` threads. fn must only
// write to per-block slots; callers merge results in block order afterwards.
inline void parallel_blocks(std::size_t nblocks, unsigned workers,
                            const std::function<void(std::size_t)>& fn) {
  if (nblocks == 0) return;
  if (workers <= 1 || nblocks == 1) {
    for (std::size_t b = 0; b < nblocks; ++b) fn(b);
    return;
  }
  unsigned nthreads = unsigned(std::min<std::size_t>(workers, nblocks));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (unsigned t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
        if (b >= nblocks) break;
        fn(b);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace klsum
