#include "specweyl/qmc.hpp"

#include "specweyl/error.hpp"

namespace specweyl::qmc {

double radical_inverse(std::uint64_t index, int base) {
  double inv = 1.0 / base;
  double factor = inv;
  double value = 0.0;
  while (index > 0) {
    value += static_cast<double>(index % base) * factor;
    index /= base;
    factor *= inv;
  }
  return value;
}

std::vector<int> halton_bases(int dim) {
  static const int primes[16] = {2,  3,  5,  7,  11, 13, 17, 19,
                                 23, 29, 31, 37, 41, 43, 47, 53};
  require(dim >= 1 && dim <= 16, errc::invalid_argument,
          "sampler dimension must be in [1, 16]");
  return std::vector<int>(primes, primes + dim);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Sampler::Sampler(int dim, std::uint64_t seed)
    : dim_(dim), seed_(seed), bases_(halton_bases(dim)) {}

void Sampler::point(std::uint64_t block, std::uint64_t index,
                    std::span<double> out) const {
  // Skip index 0 (the all-zeros Halton point) for better uniformity.
  const std::uint64_t i = index + 1;
  for (int a = 0; a < dim_; ++a) {
    const std::uint64_t h =
        splitmix64(seed_ ^ splitmix64(block * 1315423911ULL + a));
    const double shift =
        static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);  // 2^-53
    double u = radical_inverse(i, bases_[a]) + shift;
    if (u >= 1.0) u -= 1.0;
    out[a] = u;
  }
}

}  // namespace specweyl::qmc
