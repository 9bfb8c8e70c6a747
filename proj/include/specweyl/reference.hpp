#pragma once

#include <cstdint>
#include <vector>

#include "specweyl/fourier.hpp"
#include "specweyl/geometry.hpp"
#include "specweyl/pointset.hpp"

namespace specweyl::ref {

// Straight-line serial implementations of the parallel kernels, written
// independently of the streaming machinery.  Tests cross-check the parallel
// paths against these, and the benchmark target compares their speed.

// Window membership by brute scan of a generous integer index cube (or of
// the raw list for explicit sets); lexicographically ordered like the
// streaming enumerator.
std::vector<std::vector<double>> enumerate(const pts::PointSet& ps,
                                           const pts::Window& w);

std::int64_t count(const pts::PointSet& ps, const pts::Window& w);

// Serial left-to-right sum of f(center - lambda) over the window points.
double tiling_sum(const geom::Domain& dom, const pts::PointSet& ps,
                  const pts::Window& w);

// All-pairs max of f(p_j - p_i), no dedup, no parallelism.
double max_orthogonality_residual(const geom::Domain& dom,
                                  const std::vector<std::vector<double>>& points);

// Serial sweep over explicit cube centers.
pts::LandauDensities landau_density(const pts::PointSet& ps, double R,
                                    const std::vector<std::vector<double>>& centers);

// Same sampler, block layout, and estimator formulas as the parallel shell
// integrator, accumulated serially.
fourier::ShellEstimate norm_range_integral(const fourier::PowerSpectrum& f,
                                           const geom::ConvexBody& body,
                                           double r_lo, double r_hi,
                                           std::uint64_t samples,
                                           std::uint64_t seed);

// Serial cell sweep with the same grid layout as the parallel boundary
// neighborhood measure; counts are integers, so values match exactly.
double boundary_grid_measure(const geom::Domain& dom, double h);

}  // namespace specweyl::ref
