#pragma once

// Deterministic parallel search over an indexed job list.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace previsio {

/// Worker count: PREVISIO_THREADS if set to a positive integer, else the
/// hardware concurrency.
inline std::size_t thread_count() {
  if (const char* env = std::getenv("PREVISIO_THREADS")) {
    try {
      long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs `job(i)` for i in [0, n) and returns the smallest index whose job
/// reported a hit. Jobs past an already found hit are skipped, so the answer
/// does not depend on scheduling.
template <class Job>
std::optional<std::size_t> first_hit(std::size_t n, Job&& job, std::size_t threads = thread_count()) {
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{n};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n || i >= best.load()) return;
      try {
        if (job(i)) {
          std::size_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        best.store(0);
        return;
      }
    }
  };
  threads = std::min(threads, n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  if (best.load() < n) return best.load();
  return std::nullopt;
}

}  // namespace previsio
