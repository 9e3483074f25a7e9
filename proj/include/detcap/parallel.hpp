#pragma once
// Deterministic replicate parallelism: work items are indexed, every item
// owns a derived RNG stream and an output slot, and reductions run in fixed
// index order afterwards.  Results therefore never depend on the worker
// count (capped by the DETCAP_THREADS environment variable).

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace detcap {

inline int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("DETCAP_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < hw) hw = cap;
  }
  return hw;
}

template <class Fn>
void parallel_for(std::int64_t count, Fn&& fn) {
  const int workers = worker_count();
  if (count <= 0) return;
  if (workers == 1 || count == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const std::int64_t chunk = (count + workers - 1) / workers;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = static_cast<std::int64_t>(w) * chunk;
    const std::int64_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn, &first_error, &error_mutex] {
      try {
        for (std::int64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Pairwise (cascade) summation in fixed index order.
inline double pairwise_sum(std::span<const double> x) {
  if (x.empty()) return 0.0;
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.subspan(0, half)) + pairwise_sum(x.subspan(half));
}

}  // namespace detcap
