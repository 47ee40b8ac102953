#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace curvefit::kernels {

// Reductions accumulate into fixed-size blocks that are combined in block
// order, so the result does not depend on how many threads ran the loop.
inline constexpr std::size_t block_size = 2048;

// Loops shorter than this are not worth a parallel region.
inline constexpr std::size_t parallel_grain = 8192;

namespace serial {

// Plain-loop reference implementations, kept for tests and the benchmark.

template <class Fn>
void map_index(std::size_t n, Fn&& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

template <class Fn>
double sum_map(std::size_t n, Fn&& fn) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += fn(i);
  return acc;
}

double sum(std::span<const double> v);
double sum_squared_diff(std::span<const double> a, std::span<const double> b);

}  // namespace serial

// Elementwise map. Each index writes only its own outputs; fn must not throw
// on the parallel path (callers screen error conditions up front).
template <class Fn>
void map_index(std::size_t n, Fn&& fn) {
#ifdef _OPENMP
  if (n >= parallel_grain) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      fn(static_cast<std::size_t>(i));
    }
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

// Block-deterministic Σ fn(i). Inputs up to block_size take the single-block
// path, which is bit-identical to serial::sum_map.
template <class Fn>
double sum_map(std::size_t n, Fn&& fn) {
  if (n <= block_size) return serial::sum_map(n, fn);
  const std::size_t nblocks = (n + block_size - 1) / block_size;
  std::vector<double> partial(nblocks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n >= parallel_grain)
#endif
  for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * block_size;
    const std::size_t hi = std::min(lo + block_size, n);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += fn(i);
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double sum(std::span<const double> v);
double sum_squared_diff(std::span<const double> a, std::span<const double> b);

}  // namespace curvefit::kernels
