#pragma once

#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace panto {

// Runs body(i) for i in [0, n) across `workers` threads in contiguous blocks.
// Each index must write only to its own output slot; with per-index RNG
// streams the result is independent of the partition and of scheduling.
template <class Body>
void parallel_indices(std::size_t n, unsigned workers, Body&& body) {
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const unsigned t = workers;
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (unsigned w = 0; w < t; ++w) {
    const std::size_t lo = n * w / t;
    const std::size_t hi = n * (w + 1) / t;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Pairwise (cascade) summation: a fixed association order, so the result
// does not depend on how the values were produced.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace panto
