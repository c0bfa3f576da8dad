#ifndef CRITNET_SRC_PARALLEL_H
#define CRITNET_SRC_PARALLEL_H

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace critnet::internal {

inline int ResolveThreads(int requested, size_t work_items) {
  int threads = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  return std::clamp(threads, 1, std::max(1, static_cast<int>(work_items)));
}

// Calls fn(i) for i in [0, count) on up to `threads` threads. If any call
// throws, the exception of the smallest failing index is rethrown, as a
// sequential loop would report it.
template <typename Fn>
void ParallelFor(size_t count, int threads, Fn fn) {
  threads = ResolveThreads(threads, count);
  if (threads == 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::mutex error_mutex;
  size_t error_index = count;
  std::exception_ptr error;
  auto worker = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& thread : pool) thread.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace critnet::internal

#endif  // CRITNET_SRC_PARALLEL_H
