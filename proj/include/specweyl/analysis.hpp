#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specweyl/fourier.hpp"
#include "specweyl/geometry.hpp"
#include "specweyl/parallel.hpp"
#include "specweyl/pointset.hpp"

namespace specweyl::analysis {

// Max of f(lambda - mu) over all distinct point pairs in the window, where f
// is the domain power spectrum.  A zero residual certifies that the
// exponentials attached to the window points are mutually orthogonal over
// the domain.
struct OrthogonalityResult {
  double max_residual = 0.0;
  std::vector<double> worst_lambda;  // empty when fewer than two points
  std::vector<double> worst_mu;
  std::int64_t points_in_window = 0;
  std::int64_t pairs_checked = 0;
  // Distinct difference vectors actually evaluated (differences are deduped
  // and memoized for small windows); 0 when the direct pair scan was used.
  std::int64_t unique_differences = 0;
  bool vacuous = false;  // fewer than two points in the window
  bool pass = true;      // max_residual <= tol (vacuously true when vacuous)
  double tol = 0.0;
};

OrthogonalityResult check_orthogonality(const pts::PointSet& ps,
                                        const geom::Domain& dom,
                                        const pts::Window& w, double tol,
                                        par::exec ex = par::exec::par);

// One truncated tiling sum: sum of f(x - lambda) over the points with
// ||lambda - x||_K <= T, its distance from volume^2, and a certified bound
// on the dropped tail (the tail integral bound scaled by the empirical point
// density count / (|K| T^d)).
struct TilingSample {
  std::vector<double> x;
  double sum = 0.0;
  double residual = 0.0;     // |sum - volume^2|
  double certificate = 0.0;  // certified bound on the dropped tail mass
  std::int64_t points_used = 0;
};

TilingSample tiling_residual(const pts::PointSet& ps, const geom::Domain& dom,
                             const geom::ConvexBody& body,
                             std::span<const double> x, double T,
                             const fourier::TailCertificate* tail = nullptr,
                             std::uint64_t samples = std::uint64_t{1} << 16,
                             std::uint64_t seed = 1,
                             par::exec ex = par::exec::par);

// Sampled frame bounds: extremes of the tiling sum over the given centers,
// widened by the per-center tail certificate and normalized by volume^2.
struct FrameEstimate {
  double a_hat = 0.0;      // (min sum - certificate) / volume^2
  double b_hat = 0.0;      // (max sum + certificate) / volume^2
  double min_sum = 0.0;    // raw extremes, unnormalized
  double max_sum = 0.0;
  double cert_norm = 0.0;  // max per-center certificate / volume^2
  int centers_used = 0;
  bool degenerate = false;  // every sampled sum was exactly zero
  std::vector<TilingSample> samples;
};

// Deterministic low-discrepancy centers for frame/tiling sampling: over the
// lattice fundamental cell for generator-backed sets (unit cell for the
// cube-tiling kinds), over sample_box when given; explicit point sets
// require sample_box.  Distinct `block` values give disjoint streams.
std::vector<std::vector<double>> frame_sample_centers(
    const pts::PointSet& ps, int n, std::uint64_t seed,
    const geom::Box* sample_box = nullptr, std::uint64_t block = 0);

FrameEstimate estimate_frame_bounds(
    const pts::PointSet& ps, const geom::Domain& dom,
    const geom::ConvexBody& body,
    const std::vector<std::vector<double>>& centers, double T,
    const fourier::TailCertificate* tail = nullptr,
    std::uint64_t samples = std::uint64_t{1} << 16, std::uint64_t seed = 1,
    par::exec ex = par::exec::par);

enum class Verdict {
  orthogonal_basis_consistent,
  frame_consistent,
  inconsistent,
};

const char* verdict_name(Verdict v);

struct VerifyOptions {
  double tol = 1e-9;          // orthogonality / residual slack
  double trunc = 100.0;       // truncation radius T for tiling sums
  double orth_radius = 16.0;  // sup-norm radius of the orthogonality window
  int tiling_centers = 8;
  int frame_centers = 32;
  std::uint64_t samples = std::uint64_t{1} << 16;  // QMC budget for tails
  std::uint64_t seed = 1;
  // Sampling box for centers; required for explicit point sets, optional
  // override otherwise.
  std::optional<geom::Box> sample_box;
};

// Residuals within this multiple of their certificate still count as
// passing the tiling identity (certificates bound the tail, not roundoff).
inline constexpr double kTilingSafety = 1.5;

struct VerificationReport {
  OrthogonalityResult orthogonality;
  std::optional<double> separation;  // empty when < 2 points in the window
  std::vector<TilingSample> tiling_samples;
  fourier::TailCertificate tail;
  FrameEstimate frame;
  Verdict verdict = Verdict::inconsistent;
  VerifyOptions options;
};

// Full verification pipeline: orthogonality scan, separation, tiling
// residuals at seeded centers, frame-bound estimation, verdict.
VerificationReport verify(const pts::PointSet& ps, const geom::Domain& dom,
                          const geom::ConvexBody& body,
                          const VerifyOptions& opt = {},
                          par::exec ex = par::exec::par);

// Counting curve N(R) = #{lambda : ||lambda - center||_K <= R} with the
// error term E(R) = N(R) - |K| |Omega| R^d per sample.
struct CountSample {
  double r = 0.0;
  std::int64_t n = 0;
  double e = 0.0;
};

struct FitResult {
  double alpha_hat = 0.0;
  double c_hat = 0.0;
  double fit_residual = 0.0;  // RMS residual of the log-log fit
  int points_used = 0;        // envelope points entering the regression
  int usable_samples = 0;     // samples with |E| > eta
  double eta = 0.0;
  std::vector<double> envelope_log_r;
  std::vector<double> envelope_log_e;
};

struct CountingCurve {
  geom::ConvexBody body;
  geom::Domain domain;
  std::vector<double> center;
  std::vector<CountSample> samples;
  std::optional<FitResult> fit;
};

CountingCurve counting_curve(const pts::PointSet& ps, const geom::Domain& dom,
                             const geom::ConvexBody& body,
                             std::span<const double> radii,
                             std::span<const double> center = {},
                             par::exec ex = par::exec::par);

// Least-squares exponent of the error envelope: per dyadic radius block keep
// the max |E|, then fit log|E| against log R.  Samples with |E| <= eta are
// excluded (they carry no envelope information and break the log).
FitResult fit_error_exponent(const CountingCurve& curve, double eta = 0.5);

// Largest axis-aligned cube inside the search box whose open interior avoids
// every point of the set, found by binary search on the side length with
// candidate corners pinned to point coordinates.
struct EmptyCubeResult {
  double side = 0.0;
  std::vector<double> corner;  // lower corner of a witness cube
  bool empty_search = false;   // no points strictly inside the search box
  std::int64_t points_considered = 0;
};

EmptyCubeResult largest_empty_cube(const pts::PointSet& ps,
                                   const geom::Box& search_box, double delta);

// Both constant-free empty-cube bounds next to the measured value:
// bound_minkowski = (B |dOmega|_alpha / (A |Omega|))^{1/(d-alpha)} and
// bound_inscribed = (B/A) / epsilon with epsilon the inscribed cube side.
struct EmptyCubeReport {
  double r_star = 0.0;  // measured half-side: largest empty cube side / 2
  double bound_minkowski = 0.0;
  double bound_inscribed = 0.0;
  double c1 = 0.0;  // r_star / bound_minkowski
  double c2 = 0.0;  // r_star / bound_inscribed
  double alpha = 0.0;
  double a = 0.0;
  double b = 0.0;
  double epsilon = 0.0;  // inscribed cube side of the domain
  geom::MinkowskiEstimate minkowski;
  EmptyCubeResult cube;
  // (perimeter / volume) * epsilon for polygon domains: the quantity whose
  // lower bound 1/4 makes the inscribed estimate dominate.
  std::optional<double> comparison_ratio;
};

EmptyCubeReport check_empty_cube_bounds(const geom::Domain& dom,
                                        const pts::PointSet& ps, double alpha,
                                        double A, double B,
                                        const geom::Box& search_box,
                                        double delta = 1e-3,
                                        par::exec ex = par::exec::par);

}  // namespace specweyl::analysis
