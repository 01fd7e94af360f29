#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace varcz {

/// Global worker count for batch evaluations (1 = sequential).
inline std::atomic<int>& thread_count_ref() {
  static std::atomic<int> n{1};
  return n;
}
inline int thread_count() { return thread_count_ref().load(); }
inline void set_thread_count(int n) {
  thread_count_ref().store(n < 1 ? 1 : n);
}

/// Runs fn(i) for i in [0, n). Each index writes only its own output
/// slots, so the result is identical to a sequential loop.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace varcz
