#pragma once

// Independent slow-path oracles for the test suite: quadrature instead of
// closed forms, brute-force scans instead of streaming enumeration.  Nothing
// here shares formulas with the library beyond basic definitions.

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "specweyl/geometry.hpp"

namespace oracle {

// Adaptive Simpson quadrature on a smooth complex integrand.
std::complex<double> simpson(const std::function<std::complex<double>(double)>& f,
                             double a, double b, double tol);

// Indicator Fourier transform of one axis box by per-axis quadrature of
// exp(-2 pi i t xi_j); no closed-form evaluation.
std::complex<double> box_ft_quad(const specweyl::geom::Box& box,
                                 std::span<const double> xi);

// Sum of box_ft_quad over union members.
std::complex<double> boxes_ft_quad(const std::vector<specweyl::geom::Box>& bs,
                                   std::span<const double> xi);

// Indicator FT of a 2D region given as a list of x-ranges with y-interval
// functions (piecewise slabs); nested adaptive quadrature.
struct Slab {
  double x_lo = 0.0, x_hi = 0.0;
  double y_lo = 0.0, y_hi = 0.0;
};
std::complex<double> slabs_ft_quad(const std::vector<Slab>& slabs,
                                   std::span<const double> xi, double tol);

// Truncated sum of sinc^2(pi (x - n)) over |n| <= trunc in long double.
double tiling_sum_1d(double x, long long trunc);

// Brute count of points with Euclidean distance to center <= r.
std::int64_t ball_count(const std::vector<std::vector<double>>& pts,
                        std::span<const double> center, double r);

// Count of integer pairs with n1^2 + n2^2 <= r^2.
std::int64_t gauss_circle_count(double r);

// Points whose Euclidean norm is within tol of r; set upper_half to keep
// only points with nonnegative last coordinate.
std::int64_t on_sphere_count(const std::vector<std::vector<double>>& pts,
                             double r, double tol, bool upper_half);

// Largest empty open square found by binary search with corner candidates on
// a grid of the given step; accurate to about step + the bisection width.
double brute_empty_square(const std::vector<std::vector<double>>& pts,
                          const specweyl::geom::Box& box, double step);

}  // namespace oracle
