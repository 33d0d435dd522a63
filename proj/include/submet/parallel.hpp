#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace submet {

// Global worker count for the few parallel loops in the library. Every parallel
// path is written so results are byte-identical for any value (per-slot writes,
// min/max reductions only), so this knob trades wall time for nothing else.
inline std::atomic<int>& thread_count_slot() {
  static std::atomic<int> count{1};
  return count;
}

inline int thread_count() { return thread_count_slot().load(std::memory_order_relaxed); }

inline void set_thread_count(int t) { thread_count_slot().store(t < 1 ? 1 : t, std::memory_order_relaxed); }

/// Runs fn(i) for i in [0, n). fn must only write to state owned by index i.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const int threads = thread_count();
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  constexpr std::size_t kChunk = 16;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t begin = next.fetch_add(kChunk, std::memory_order_relaxed);
        if (begin >= n) return;
        const std::size_t end = std::min(begin + kChunk, n);
        for (std::size_t i = begin; i < end; ++i) fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace submet
