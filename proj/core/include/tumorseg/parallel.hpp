#ifndef TUMORSEG_PARALLEL_HPP
#define TUMORSEG_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace tumorseg {

// Runs fn(i) for every i in [0, n) on up to `threads` workers (0 = hardware
// concurrency). Each call must write only to its own output slot, which
// keeps results independent of scheduling. The first exception thrown by
// any worker is rethrown on the calling thread after all workers finish.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         unsigned threads = 0) {
  if (n == 0) return;
  unsigned want = threads ? threads : std::thread::hardware_concurrency();
  if (want == 0) want = 1;
  if (want > n) want = static_cast<unsigned>(n);
  if (want == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(want);
  for (unsigned t = 0; t < want; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace tumorseg

#endif
