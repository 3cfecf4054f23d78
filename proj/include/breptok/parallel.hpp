#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace breptok {

// Worker count: BREPTOK_THREADS when set (>= 1), else hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("BREPTOK_THREADS")) {
    char* end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (end != env && n >= 1) return static_cast<unsigned>(std::min(n, 1024L));
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Runs fn(i) for i in [0, n) on a static block partition.  fn must be safe to
// call concurrently for distinct i; write results into pre-sized storage by
// index so the output is independent of the thread count.  The first
// exception thrown by any block is rethrown after all threads join.
template <typename Fn>
void parallel_for(size_t n, Fn&& fn) {
  const size_t threads = std::min<size_t>(worker_count(), n);
  if (threads <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  auto run_block = [&](size_t t) {
    const size_t lo = n * t / threads;
    const size_t hi = n * (t + 1) / threads;
    try {
      for (size_t i = lo; i < hi; ++i) fn(i);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (size_t t = 1; t < threads; ++t) pool.emplace_back(run_block, t);
  run_block(0);
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace breptok
