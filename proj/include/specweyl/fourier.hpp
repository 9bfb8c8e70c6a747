#pragma once

#include <complex>
#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "specweyl/geometry.hpp"
#include "specweyl/parallel.hpp"

namespace specweyl::fourier {

// Fourier transform of the domain indicator, convention
//   F(xi) = integral over the domain of exp(-2*pi*i x.xi) dx.
// Closed forms per domain kind; removable singularities handled by exact and
// series branches so the result is continuous across xi_j -> 0.
std::complex<double> ft_indicator(const geom::Domain& dom,
                                  std::span<const double> xi);

// f(xi) = |F(xi)|^2.  Nonnegative, even, f(0) = volume^2.
class PowerSpectrum {
 public:
  enum class Cache { none, exact_key };

  explicit PowerSpectrum(geom::Domain dom, Cache policy = Cache::none);

  double operator()(std::span<const double> xi) const;
  const geom::Domain& domain() const { return dom_; }
  std::size_t cache_size() const;

 private:
  geom::Domain dom_;
  Cache policy_;
  // Memo keyed on the exact coordinate bit patterns; inserts are idempotent
  // (same key always maps to the same value), so the lock only guards the
  // map structure.
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, double> memo_;
};

struct ShellEstimate {
  double value = 0.0;      // integral of f over the norm shell
  double std_error = 0.0;  // block-based standard error of the estimate
  bool underflow = false;  // no sample produced a nonzero integrand
  std::uint64_t samples = 0;
};

// Integral of f over {r_lo < ||xi||_K <= r_hi} by low-discrepancy rejection
// sampling from the bounding box of the outer body.  Deterministic for a
// fixed seed regardless of thread count.
ShellEstimate norm_range_integral(const PowerSpectrum& ps,
                                  const geom::ConvexBody& body, double r_lo,
                                  double r_hi, std::uint64_t samples,
                                  std::uint64_t seed,
                                  par::exec ex = par::exec::par);

// Dyadic shell {R < ||xi||_K <= 2R}.
ShellEstimate shell_integral(const PowerSpectrum& ps,
                             const geom::ConvexBody& body, double R,
                             std::uint64_t samples = std::uint64_t{1} << 16,
                             std::uint64_t seed = 1,
                             par::exec ex = par::exec::par);

struct TailCertificate {
  double threshold = 0.0;   // truncation radius T in body-norm units
  double tail_bound = 0.0;  // certified upper bound on the tail integral
  // analytic-majorant: exact envelope arithmetic (boxes and box unions);
  // shell-sum: inflated quadrature shells only; fitted-decay: shell-sum plus
  // a geometric remainder from the fitted decay slope.
  std::string method;
  std::vector<double> shell_radius;     // inner radius per dyadic shell
  std::vector<double> shell_value;      // certified contribution per shell
  std::vector<double> shell_std_error;  // raw standard error per shell
  double remainder = 0.0;               // fitted-decay remainder term
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// Certified upper bound on the integral of f outside the body ball of radius
// T.  Boxes and box unions get a deterministic analytic bound; polygons fall
// back to inflated shell quadrature with a fitted remainder.
TailCertificate tail_certificate(const PowerSpectrum& ps,
                                 const geom::ConvexBody& body, double T,
                                 std::uint64_t samples = std::uint64_t{1}
                                                         << 16,
                                 std::uint64_t seed = 1,
                                 par::exec ex = par::exec::par);

// Integral outside the sup-norm box [-s,s]^d of the product envelope that
// dominates f for box-union domains.  Exposed for direct testing.
double majorant_tail_integral(const geom::Domain& dom, double s);

}  // namespace specweyl::fourier
