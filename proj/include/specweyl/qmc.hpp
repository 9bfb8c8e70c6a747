#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace specweyl::qmc {

// Van der Corput radical inverse of index in the given prime base.
double radical_inverse(std::uint64_t index, int base);

// First d primes, d <= 16 (desk-scale dimensions).
std::vector<int> halton_bases(int dim);

// Deterministic low-discrepancy sampler: Halton sequence with a seeded
// Cranley-Patterson rotation per block.  Blocks give independent randomized
// replicates, so block means yield an honest standard-error estimate while
// the whole stream stays reproducible from (seed, block, index).
class Sampler {
 public:
  Sampler(int dim, std::uint64_t seed);

  // Fill out[0..dim) with sample `index` of block `block`, all in [0, 1).
  void point(std::uint64_t block, std::uint64_t index,
             std::span<double> out) const;

  int dim() const { return dim_; }

 private:
  int dim_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<int> bases_;
};

// Scrambling/rotation stream shared with other deterministic choices.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace specweyl::qmc
