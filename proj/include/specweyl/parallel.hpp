#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

// Deterministic parallel primitives.  Every reduction here partitions work
// into fixed-size blocks (independent of the worker count), combines block
// partials in a fixed pairwise tree, and therefore produces bit-identical
// results for any thread count, including the serial path.

namespace specweyl::par {

enum class exec { seq, par };

// Worker cap: min(omp_get_max_threads(), $SPECTRAL_WEYL_THREADS if set).
int max_threads();

// Default block length for block-wise reductions.
inline constexpr std::size_t kBlock = 4096;

// Pairwise (cascade) sum of a contiguous array; fixed tree, deterministic.
double pairwise_sum(std::span<const double> xs);

// Sum of fn(begin, end) over fixed blocks of [0, n); partials combined
// pairwise in block order.  fn must be a pure function of its range.
double block_sum(std::size_t n, exec ex,
                 const std::function<double(std::size_t, std::size_t)>& fn,
                 std::size_t block = kBlock);

// Integer counting variant (exact, order-independent).
std::int64_t block_count(
    std::size_t n, exec ex,
    const std::function<std::int64_t(std::size_t, std::size_t)>& fn,
    std::size_t block = kBlock);

// Parallel loop over fixed blocks with no reduction; the body receives
// (block index, begin, end) and must write to disjoint state per block.
void for_blocks(
    std::size_t n, exec ex,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& body,
    std::size_t block = kBlock);

}  // namespace specweyl::par
