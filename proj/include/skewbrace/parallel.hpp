#pragma once

// Deterministic range partitioning over std::thread.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

namespace skewbrace {

/// Shared knobs for checks that sweep or sample: the seed fixes every sample,
/// the worker count only changes wall time.
struct CheckOptions {
  std::uint64_t seed = 0;
  unsigned workers = 1;
  /// Minimum number of random pairs/elements in sampled modes.
  std::uint64_t samples = 10000;
  /// Minimum number of random triples for sampled brace-axiom checks.
  std::uint64_t triple_samples = 100000;
};

namespace detail {

/// Runs body(begin, end) on contiguous chunks of [0, total).
inline void parallel_chunks(std::uint64_t total, unsigned workers,
                            const std::function<void(std::uint64_t, std::uint64_t, unsigned)>& body) {
  workers = std::max(1u, workers);
  if (workers == 1 || total < 2 * workers) {
    body(0, total, 0);
    return;
  }
  std::vector<std::thread> pool;
  std::uint64_t chunk = (total + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::uint64_t b = std::min(total, w * chunk), e = std::min(total, b + chunk);
    if (b >= e) break;
    pool.emplace_back(body, b, e, w);
  }
  for (auto& t : pool) t.join();
}

/// Smallest i in [0, total) with ok(i) == false, independent of workers.
template <class Pred>
std::optional<std::uint64_t> find_first_failure(std::uint64_t total, unsigned workers, Pred ok) {
  std::atomic<std::uint64_t> best{total};
  parallel_chunks(total, workers, [&](std::uint64_t b, std::uint64_t e, unsigned) {
    for (std::uint64_t i = b; i < e; ++i) {
      if (i >= best.load(std::memory_order_relaxed)) return;
      if (!ok(i)) {
        std::uint64_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
        return;
      }
    }
  });
  if (best.load() == total) return std::nullopt;
  return best.load();
}

/// Evaluates f on every index, storing results in order.
template <class T, class F>
std::vector<T> parallel_map(std::uint64_t total, unsigned workers, F f) {
  std::vector<T> out(total);
  parallel_chunks(total, workers, [&](std::uint64_t b, std::uint64_t e, unsigned) {
    for (std::uint64_t i = b; i < e; ++i) out[i] = f(i);
  });
  return out;
}

}  // namespace detail
}  // namespace skewbrace
