#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace slabeling {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for i in [0, count) on `threads` workers, pulling fixed-size
/// blocks off a shared counter. Results must be written to per-index slots;
/// the work split never affects values.
template <typename Fn>
void parallel_for(long count, int threads, Fn&& fn, long block = 64) {
  threads = resolve_threads(threads);
  if (count <= 0) return;
  if (threads <= 1 || count <= block) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  auto worker = [&] {
    for (;;) {
      const long start = next.fetch_add(block);
      if (start >= count) return;
      const long stop = std::min(count, start + block);
      for (long i = start; i < stop; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads) - 1);
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
}

}  // namespace slabeling
