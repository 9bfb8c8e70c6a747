#include "specweyl/parallel.hpp"

#include <algorithm>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace specweyl::par {

int max_threads() {
  int hw = 1;
#ifdef _OPENMP
  hw = omp_get_max_threads();
#endif
  if (const char* env = std::getenv("SPECTRAL_WEYL_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) hw = std::min<long>(hw, cap);
  }
  return std::max(hw, 1);
}

double pairwise_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

namespace {

std::size_t block_count_for(std::size_t n, std::size_t block) {
  return n == 0 ? 0 : (n + block - 1) / block;
}

}  // namespace

double block_sum(std::size_t n, exec ex,
                 const std::function<double(std::size_t, std::size_t)>& fn,
                 std::size_t block) {
  const std::size_t nb = block_count_for(n, block);
  if (nb == 0) return 0.0;
  std::vector<double> partial(nb);
  const auto run = [&](std::size_t b) {
    const std::size_t lo = b * block;
    const std::size_t hi = std::min(n, lo + block);
    partial[b] = fn(lo, hi);
  };
#ifdef _OPENMP
  if (ex == exec::par && nb > 1) {
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(nb); ++b)
      run(static_cast<std::size_t>(b));
    return pairwise_sum(partial);
  }
#else
  (void)ex;
#endif
  for (std::size_t b = 0; b < nb; ++b) run(b);
  return pairwise_sum(partial);
}

std::int64_t block_count(
    std::size_t n, exec ex,
    const std::function<std::int64_t(std::size_t, std::size_t)>& fn,
    std::size_t block) {
  const std::size_t nb = block_count_for(n, block);
  if (nb == 0) return 0;
  std::vector<std::int64_t> partial(nb);
  const auto run = [&](std::size_t b) {
    const std::size_t lo = b * block;
    const std::size_t hi = std::min(n, lo + block);
    partial[b] = fn(lo, hi);
  };
#ifdef _OPENMP
  if (ex == exec::par && nb > 1) {
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(nb); ++b)
      run(static_cast<std::size_t>(b));
    std::int64_t total = 0;
    for (std::int64_t p : partial) total += p;
    return total;
  }
#else
  (void)ex;
#endif
  std::int64_t total = 0;
  for (std::size_t b = 0; b < nb; ++b) {
    run(b);
    total += partial[b];
  }
  return total;
}

void for_blocks(
    std::size_t n, exec ex,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& body,
    std::size_t block) {
  const std::size_t nb = block_count_for(n, block);
  if (nb == 0) return;
  const auto run = [&](std::size_t b) {
    const std::size_t lo = b * block;
    const std::size_t hi = std::min(n, lo + block);
    body(b, lo, hi);
  };
#ifdef _OPENMP
  if (ex == exec::par && nb > 1) {
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(nb); ++b)
      run(static_cast<std::size_t>(b));
    return;
  }
#else
  (void)ex;
#endif
  for (std::size_t b = 0; b < nb; ++b) run(b);
}

}  // namespace specweyl::par
