#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specweyl/parallel.hpp"

namespace specweyl::geom {

using Point2 = std::array<double, 2>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

// Axis-aligned box, one interval per coordinate.
struct Box {
  std::vector<Interval> sides;

  int dim() const { return static_cast<int>(sides.size()); }
  double volume() const;
  double min_side() const;
  bool contains(std::span<const double> x) const;
  // Euclidean distance from x to the box (0 inside).
  double distance(std::span<const double> x) const;
};

Box make_box(std::initializer_list<Interval> sides);

enum class DomainKind { box, box_union, polygon2d };

// Bounded spatial domain: a box, a finite union of pairwise disjoint boxes,
// or a simple polygon in the plane.  Validated at construction.
class Domain {
 public:
  static Domain box(Box b);
  static Domain box_union(std::vector<Box> boxes);
  static Domain polygon(std::vector<Point2> vertices);  // simple, any orientation

  int dim() const { return dim_; }
  DomainKind kind() const { return kind_; }
  double volume() const { return volume_; }
  Box bounding_box() const;

  const std::vector<Box>& boxes() const { return boxes_; }
  // Counter-clockwise vertex list (normalized at construction).
  const std::vector<Point2>& polygon_vertices() const { return poly_; }
  double polygon_perimeter() const;

  bool contains(std::span<const double> x) const;
  // Euclidean distance from x to the topological boundary of the domain.
  double boundary_distance(std::span<const double> x) const;
  // Boundary decomposition of a box or box union as axis-degenerate boxes;
  // empty for polygons (use the edges instead).
  const std::vector<Box>& boundary_facets() const { return facets_; }

 private:
  Domain() = default;
  void build_boundary_facets();

  int dim_ = 0;
  DomainKind kind_ = DomainKind::box;
  double volume_ = 0.0;
  std::vector<Box> boxes_;
  std::vector<Point2> poly_;
  // Boundary decomposition of a box union: axis-degenerate boxes covering
  // exactly the facets that separate the union from its complement.
  std::vector<Box> facets_;
};

enum class BodyKind { ball, cube, polytope };

// Origin-symmetric convex body defining the norm used for counting windows.
class ConvexBody {
 public:
  static ConvexBody ball(int dim, double radius = 1.0);
  static ConvexBody cube(int dim, double radius = 1.0);  // radius = half side
  // {x : <n_i, x> <= 1}; the normal list must be closed under n -> -n.
  static ConvexBody polytope(int dim, std::vector<std::vector<double>> normals);

  int dim() const { return dim_; }
  BodyKind kind() const { return kind_; }
  double radius() const { return radius_; }
  const std::vector<std::vector<double>>& normals() const { return normals_; }

  // Minkowski functional: norm(x) <= R  <=>  x in R*K.
  double norm(std::span<const double> x) const;
  // Support function evaluated at the coordinate axes: half-extent of the
  // bounding box of K along axis j.
  double axis_support(int axis) const;
  // max over the 2^d cube corners (+-1,...,+-1) of norm(corner); the largest
  // s with [-s,s]^d inside T*K is T / corner_norm_max().
  double corner_norm_max() const;

  double volume() const { return volume_; }
  // Half-width of the QMC confidence interval when the volume was sampled
  // (polytopes in dim > 3); 0 when the volume is exact.
  double volume_ci() const { return volume_ci_; }

 private:
  ConvexBody() = default;
  void finalize_polytope();

  int dim_ = 0;
  BodyKind kind_ = BodyKind::ball;
  double radius_ = 1.0;
  std::vector<std::vector<double>> normals_;
  std::vector<std::vector<double>> vertices_;  // polytope only
  std::vector<double> axis_support_;
  double corner_norm_max_ = 0.0;
  double volume_ = 0.0;
  double volume_ci_ = 0.0;
};

// |Omega| for domains, |K| for bodies.
double volume(const Domain& dom);
double body_volume(const ConvexBody& body);
double norm_K(const ConvexBody& body, std::span<const double> x);

struct NeighborhoodMeasure {
  double value = 0.0;
  std::string method;       // "exact" or "grid"
  double resolution = 0.0;  // grid step (0 for exact)
};

enum class MeasureMethod { automatic, exact, grid };

// Lebesgue measure of the two-sided h-neighborhood of the domain boundary.
// Exact inflate/deflate arithmetic for a single box, grid counting otherwise.
NeighborhoodMeasure boundary_neighborhood_measure(
    const Domain& dom, double h, MeasureMethod method = MeasureMethod::automatic,
    par::exec ex = par::exec::par);

struct MinkowskiEstimate {
  double alpha = 0.0;
  double content = 0.0;               // sup over scales of M(h) / (2 h^{d-alpha})
  std::vector<double> scales;         // h values, strictly decreasing
  std::vector<double> ratios;         // per-scale normalized ratios
  bool scale_instability = false;     // raised when ratios drift beyond 10%
};

// Upper Minkowski content estimate at codimension exponent alpha in [d-1, d).
// Normalization: M(h) / (2 h^{d-alpha}), so the unit square at alpha = 1 has
// content 4 (its perimeter).
MinkowskiEstimate minkowski_content_estimate(const Domain& dom, double alpha,
                                             std::vector<double> scales,
                                             par::exec ex = par::exec::par);

// Side length of the largest axis-aligned cube contained in the domain;
// relative tolerance 1e-3.  Exact for boxes and unions, sup-norm clearance
// maximization for polygons.
double inscribed_cube_side(const Domain& dom);

struct IsoperimetricRecord {
  double perimeter = 0.0;
  double volume = 0.0;
  double epsilon = 0.0;    // inscribed square side
  double constant_c = 0.0; // perimeter * epsilon / volume
};

IsoperimetricRecord polygon_isoperimetric_check(const Domain& dom);

// --- shared low-level helpers (also used by other modules and tests) ---

double polygon_signed_area(const std::vector<Point2>& vs);
bool point_in_polygon(const std::vector<Point2>& vs, double x, double y);
// Euclidean distance from p to segment [a, b].
double segment_distance(const Point2& a, const Point2& b, double px, double py);
// Sup-norm distance from p to segment [a, b].
double segment_distance_sup(const Point2& a, const Point2& b, double px,
                            double py);
// Axis-aligned subtraction: parts of `from` not covered by `cut`.
std::vector<Box> subtract_box(const Box& from, const Box& cut);

}  // namespace specweyl::geom
