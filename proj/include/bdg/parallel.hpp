#pragma once

// Pointwise maps and reductions over grid indices.
//
// Reductions are split into fixed-size chunks whose partial sums are combined
// serially in chunk order, so the result does not depend on the number of
// worker threads.

#include <algorithm>
#include <cstddef>
#include <vector>

namespace bdg::parallel {

inline constexpr std::size_t kChunk = 256;

// Reads BDG_THREADS and caps the worker count. No-op without OpenMP.
void configure_from_env();
int thread_count();

template <class F>
void for_each(std::size_t n, F&& f) {
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) f(static_cast<std::size_t>(i));
}

template <class T, class F>
T sum(std::size_t n, F&& term) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<T> partial(chunks, T{});
  const auto count = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < count; ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = std::min(n, lo + kChunk);
    T acc{};
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    partial[static_cast<std::size_t>(c)] = acc;
  }
  T total{};
  for (const T& p : partial) total += p;
  return total;
}

template <class F>
double max(std::size_t n, double init, F&& term) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  if (chunks == 0) return init;
  std::vector<double> partial(chunks, init);
  const auto count = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < count; ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = std::min(n, lo + kChunk);
    double acc = init;
    for (std::size_t i = lo; i < hi; ++i) acc = std::max(acc, term(i));
    partial[static_cast<std::size_t>(c)] = acc;
  }
  return *std::max_element(partial.begin(), partial.end());
}

}  // namespace bdg::parallel
