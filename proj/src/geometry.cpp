#include "specweyl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>

#include "specweyl/error.hpp"
#include "specweyl/qmc.hpp"

namespace specweyl::geom {

namespace {

constexpr double kTinyRel = 1e-12;

double scale_of(std::span<const double> xs) {
  double s = 1.0;
  for (double x : xs) s = std::max(s, std::abs(x));
  return s;
}

bool all_finite(std::span<const double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Box

double Box::volume() const {
  double v = 1.0;
  for (const auto& s : sides) v *= s.width();
  return v;
}

double Box::min_side() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : sides) m = std::min(m, s.width());
  return m;
}

bool Box::contains(std::span<const double> x) const {
  for (std::size_t j = 0; j < sides.size(); ++j)
    if (x[j] < sides[j].lo || x[j] > sides[j].hi) return false;
  return true;
}

double Box::distance(std::span<const double> x) const {
  double d2 = 0.0;
  for (std::size_t j = 0; j < sides.size(); ++j) {
    const double c = std::max({sides[j].lo - x[j], 0.0, x[j] - sides[j].hi});
    d2 += c * c;
  }
  return std::sqrt(d2);
}

Box make_box(std::initializer_list<Interval> sides) {
  Box b;
  b.sides.assign(sides.begin(), sides.end());
  return b;
}

namespace {

double box_distance_sup(const Box& b, std::span<const double> x) {
  double d = 0.0;
  for (std::size_t j = 0; j < b.sides.size(); ++j) {
    const double c =
        std::max({b.sides[j].lo - x[j], 0.0, x[j] - b.sides[j].hi});
    d = std::max(d, c);
  }
  return d;
}

void validate_box(const Box& b, const char* what) {
  require(b.dim() >= 1, errc::invalid_domain,
          std::string(what) + ": box needs at least one axis");
  for (const auto& s : b.sides) {
    require(std::isfinite(s.lo) && std::isfinite(s.hi), errc::invalid_domain,
            std::string(what) + ": non-finite box bound");
    require(s.hi > s.lo, errc::invalid_domain,
            std::string(what) + ": box sides must have positive width");
  }
}

}  // namespace

std::vector<Box> subtract_box(const Box& from, const Box& cut) {
  const int d = from.dim();
  Box overlap;
  overlap.sides.resize(d);
  for (int j = 0; j < d; ++j) {
    overlap.sides[j].lo = std::max(from.sides[j].lo, cut.sides[j].lo);
    overlap.sides[j].hi = std::min(from.sides[j].hi, cut.sides[j].hi);
    if (overlap.sides[j].hi - overlap.sides[j].lo <= 0.0) return {from};
  }
  // Peel off the slabs of `from` outside the overlap, one axis at a time.
  std::vector<Box> parts;
  Box core = from;
  for (int j = 0; j < d; ++j) {
    if (core.sides[j].lo < overlap.sides[j].lo) {
      Box below = core;
      below.sides[j].hi = overlap.sides[j].lo;
      parts.push_back(below);
    }
    if (core.sides[j].hi > overlap.sides[j].hi) {
      Box above = core;
      above.sides[j].lo = overlap.sides[j].hi;
      parts.push_back(above);
    }
    core.sides[j] = overlap.sides[j];
  }
  return parts;
}

// ---------------------------------------------------------------------------
// Polygon helpers

double polygon_signed_area(const std::vector<Point2>& vs) {
  double a = 0.0;
  const std::size_t n = vs.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = vs[i];
    const auto& q = vs[(i + 1) % n];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * a;
}

bool point_in_polygon(const std::vector<Point2>& vs, double x, double y) {
  bool inside = false;
  const std::size_t n = vs.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = vs[i];
    const auto& b = vs[(i + 1) % n];
    if ((a[1] > y) != (b[1] > y)) {
      const double xi = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
      if (x < xi) inside = !inside;
    }
  }
  return inside;
}

double segment_distance(const Point2& a, const Point2& b, double px,
                        double py) {
  const double ex = b[0] - a[0];
  const double ey = b[1] - a[1];
  const double dx = px - a[0];
  const double dy = py - a[1];
  const double len2 = ex * ex + ey * ey;
  double t = len2 > 0.0 ? (dx * ex + dy * ey) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double rx = dx - t * ex;
  const double ry = dy - t * ey;
  return std::hypot(rx, ry);
}

double segment_distance_sup(const Point2& a, const Point2& b, double px,
                            double py) {
  // h(t) = max(|dx - t ex|, |dy - t ey|) is piecewise linear on [0, 1]; the
  // minimum is attained at an endpoint, at a zero of either component, or
  // where the two components meet in absolute value.
  const double ex = b[0] - a[0];
  const double ey = b[1] - a[1];
  const double dx = px - a[0];
  const double dy = py - a[1];
  double ts[6];
  int nt = 0;
  ts[nt++] = 0.0;
  ts[nt++] = 1.0;
  if (ex != 0.0) ts[nt++] = dx / ex;
  if (ey != 0.0) ts[nt++] = dy / ey;
  if (ex != ey) ts[nt++] = (dx - dy) / (ex - ey);
  if (ex != -ey) ts[nt++] = (dx + dy) / (ex + ey);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nt; ++i) {
    const double t = std::clamp(ts[i], 0.0, 1.0);
    const double h = std::max(std::abs(dx - t * ex), std::abs(dy - t * ey));
    best = std::min(best, h);
  }
  return best;
}

namespace {

int orient(const Point2& a, const Point2& b, const Point2& c, double eps) {
  const double v =
      (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  if (v > eps) return 1;
  if (v < -eps) return -1;
  return 0;
}

bool on_segment(const Point2& a, const Point2& b, const Point2& p,
                double eps) {
  return p[0] >= std::min(a[0], b[0]) - eps &&
         p[0] <= std::max(a[0], b[0]) + eps &&
         p[1] >= std::min(a[1], b[1]) - eps &&
         p[1] <= std::max(a[1], b[1]) + eps;
}

bool segments_cross(const Point2& a, const Point2& b, const Point2& c,
                    const Point2& d, double eps) {
  const int o1 = orient(a, b, c, eps);
  const int o2 = orient(a, b, d, eps);
  const int o3 = orient(c, d, a, eps);
  const int o4 = orient(c, d, b, eps);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c, eps)) return true;
  if (o2 == 0 && on_segment(a, b, d, eps)) return true;
  if (o3 == 0 && on_segment(c, d, a, eps)) return true;
  if (o4 == 0 && on_segment(c, d, b, eps)) return true;
  return false;
}

void validate_polygon(const std::vector<Point2>& vs) {
  require(vs.size() >= 3, errc::invalid_domain,
          "polygon needs at least 3 vertices");
  double scale = 1.0;
  for (const auto& v : vs) {
    require(std::isfinite(v[0]) && std::isfinite(v[1]), errc::invalid_domain,
            "polygon vertex is not finite");
    scale = std::max({scale, std::abs(v[0]), std::abs(v[1])});
  }
  const double eps = kTinyRel * scale;
  const std::size_t n = vs.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = vs[i];
    const auto& b = vs[(i + 1) % n];
    require(std::abs(a[0] - b[0]) > eps || std::abs(a[1] - b[1]) > eps,
            errc::invalid_domain, "polygon has a zero-length edge");
  }
  require(std::abs(polygon_signed_area(vs)) > eps * eps,
          errc::invalid_domain, "polygon is degenerate (zero area)");
  // Simplicity: non-adjacent edges must not intersect.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      const double tight = eps * 1e-2;  // strict crossings only
      if (segments_cross(vs[i], vs[(i + 1) % n], vs[j], vs[(j + 1) % n],
                         tight)) {
        fail(errc::invalid_domain, "polygon is self-intersecting");
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain

Domain Domain::box(Box b) {
  validate_box(b, "domain");
  Domain d;
  d.dim_ = b.dim();
  d.kind_ = DomainKind::box;
  d.boxes_.push_back(std::move(b));
  d.volume_ = d.boxes_[0].volume();
  d.build_boundary_facets();
  return d;
}

Domain Domain::box_union(std::vector<Box> boxes) {
  require(!boxes.empty(), errc::invalid_domain, "box union is empty");
  const int dim = boxes[0].dim();
  double scale = 1.0;
  for (const auto& b : boxes) {
    validate_box(b, "domain");
    require(b.dim() == dim, errc::invalid_domain,
            "box union mixes dimensions");
    for (const auto& s : b.sides)
      scale = std::max({scale, std::abs(s.lo), std::abs(s.hi)});
  }
  const double eps = kTinyRel * scale;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      bool overlap = true;
      for (int k = 0; k < dim; ++k) {
        const double lo = std::max(boxes[i].sides[k].lo, boxes[j].sides[k].lo);
        const double hi = std::min(boxes[i].sides[k].hi, boxes[j].sides[k].hi);
        if (hi - lo <= eps) {
          overlap = false;
          break;
        }
      }
      require(!overlap, errc::invalid_domain,
              "box union members must have disjoint interiors");
    }
  }
  Domain d;
  d.dim_ = dim;
  d.kind_ = boxes.size() == 1 ? DomainKind::box : DomainKind::box_union;
  d.boxes_ = std::move(boxes);
  d.volume_ = 0.0;
  for (const auto& b : d.boxes_) d.volume_ += b.volume();
  d.build_boundary_facets();
  return d;
}

Domain Domain::polygon(std::vector<Point2> vertices) {
  // Drop a duplicated closing vertex if present.
  if (vertices.size() >= 2) {
    const auto& f = vertices.front();
    const auto& l = vertices.back();
    if (f[0] == l[0] && f[1] == l[1]) vertices.pop_back();
  }
  validate_polygon(vertices);
  if (polygon_signed_area(vertices) < 0.0)
    std::reverse(vertices.begin(), vertices.end());
  Domain d;
  d.dim_ = 2;
  d.kind_ = DomainKind::polygon2d;
  d.poly_ = std::move(vertices);
  d.volume_ = polygon_signed_area(d.poly_);
  return d;
}

Box Domain::bounding_box() const {
  Box b;
  b.sides.assign(dim_, Interval{std::numeric_limits<double>::infinity(),
                                -std::numeric_limits<double>::infinity()});
  if (kind_ == DomainKind::polygon2d) {
    for (const auto& v : poly_) {
      for (int j = 0; j < 2; ++j) {
        b.sides[j].lo = std::min(b.sides[j].lo, v[j]);
        b.sides[j].hi = std::max(b.sides[j].hi, v[j]);
      }
    }
  } else {
    for (const auto& bx : boxes_) {
      for (int j = 0; j < dim_; ++j) {
        b.sides[j].lo = std::min(b.sides[j].lo, bx.sides[j].lo);
        b.sides[j].hi = std::max(b.sides[j].hi, bx.sides[j].hi);
      }
    }
  }
  return b;
}

double Domain::polygon_perimeter() const {
  require(kind_ == DomainKind::polygon2d, errc::invalid_argument,
          "perimeter is defined for polygon domains");
  double p = 0.0;
  const std::size_t n = poly_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = poly_[i];
    const auto& b = poly_[(i + 1) % n];
    p += std::hypot(b[0] - a[0], b[1] - a[1]);
  }
  return p;
}

bool Domain::contains(std::span<const double> x) const {
  if (kind_ == DomainKind::polygon2d) {
    if (point_in_polygon(poly_, x[0], x[1])) return true;
    const double eps = kTinyRel * std::max(scale_of(x), 1.0);
    return boundary_distance(x) <= eps;
  }
  for (const auto& b : boxes_)
    if (b.contains(x)) return true;
  return false;
}

double Domain::boundary_distance(std::span<const double> x) const {
  double best = std::numeric_limits<double>::infinity();
  if (kind_ == DomainKind::polygon2d) {
    const std::size_t n = poly_.size();
    for (std::size_t i = 0; i < n; ++i)
      best = std::min(
          best, segment_distance(poly_[i], poly_[(i + 1) % n], x[0], x[1]));
    return best;
  }
  for (const auto& f : facets_) best = std::min(best, f.distance(x));
  return best;
}

void Domain::build_boundary_facets() {
  facets_.clear();
  if (kind_ == DomainKind::polygon2d) return;
  double scale = 1.0;
  for (const auto& b : boxes_)
    for (const auto& s : b.sides)
      scale = std::max({scale, std::abs(s.lo), std::abs(s.hi)});
  const double eps = kTinyRel * scale;

  // Each face of each member, minus the projections of members touching it
  // from the other side, is genuine boundary of the union.
  for (std::size_t bi = 0; bi < boxes_.size(); ++bi) {
    const Box& b = boxes_[bi];
    const int d = b.dim();
    for (int k = 0; k < d; ++k) {
      for (int side = 0; side < 2; ++side) {
        const double c = side == 0 ? b.sides[k].lo : b.sides[k].hi;
        // Face extent in the remaining axes.
        Box face;
        face.sides.reserve(d - 1);
        for (int j = 0; j < d; ++j)
          if (j != k) face.sides.push_back(b.sides[j]);
        std::vector<Box> pieces{face};
        for (std::size_t oi = 0; oi < boxes_.size() && !pieces.empty(); ++oi) {
          if (oi == bi) continue;
          const Box& o = boxes_[oi];
          const double touch = side == 0 ? o.sides[k].hi : o.sides[k].lo;
          if (std::abs(touch - c) > eps) continue;
          Box cut;
          cut.sides.reserve(d - 1);
          for (int j = 0; j < d; ++j)
            if (j != k) cut.sides.push_back(o.sides[j]);
          std::vector<Box> next;
          for (const auto& piece : pieces) {
            auto parts = subtract_box(piece, cut);
            next.insert(next.end(), parts.begin(), parts.end());
          }
          pieces = std::move(next);
        }
        for (const auto& piece : pieces) {
          Box facet;
          facet.sides.resize(d);
          int jj = 0;
          for (int j = 0; j < d; ++j) {
            if (j == k) {
              facet.sides[j] = Interval{c, c};
            } else {
              facet.sides[j] = piece.sides[jj++];
            }
          }
          facets_.push_back(std::move(facet));
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// ConvexBody

namespace {

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

// Solve A x = b for small dense systems; returns false when singular.
bool solve_dense(std::vector<std::vector<double>> a, std::vector<double> b,
                 std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-12) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int cc = col; cc < n; ++cc) a[r][cc] -= f * a[col][cc];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int cc = r + 1; cc < n; ++cc) s -= a[r][cc] * x[cc];
    x[r] = s / a[r][r];
  }
  return true;
}

int matrix_rank(std::vector<std::vector<double>> a) {
  if (a.empty()) return 0;
  const int rows = static_cast<int>(a.size());
  const int cols = static_cast<int>(a[0].size());
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    double best = 1e-10;
    for (int r = rank; r < rows; ++r) {
      if (std::abs(a[r][col]) > best) {
        best = std::abs(a[r][col]);
        piv = r;
      }
    }
    if (piv < 0) continue;
    std::swap(a[piv], a[rank]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      const double f = a[r][col] / a[rank][col];
      for (int cc = 0; cc < cols; ++cc) a[r][cc] -= f * a[rank][cc];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

ConvexBody ConvexBody::ball(int dim, double radius) {
  require(dim >= 1, errc::invalid_body, "body dimension must be positive");
  require(std::isfinite(radius) && radius > 0.0, errc::invalid_body,
          "ball radius must be positive");
  ConvexBody k;
  k.dim_ = dim;
  k.kind_ = BodyKind::ball;
  k.radius_ = radius;
  k.axis_support_.assign(dim, radius);
  k.corner_norm_max_ = std::sqrt(static_cast<double>(dim)) / radius;
  k.volume_ = unit_ball_volume(dim) * std::pow(radius, dim);
  return k;
}

ConvexBody ConvexBody::cube(int dim, double radius) {
  require(dim >= 1, errc::invalid_body, "body dimension must be positive");
  require(std::isfinite(radius) && radius > 0.0, errc::invalid_body,
          "cube radius must be positive");
  ConvexBody k;
  k.dim_ = dim;
  k.kind_ = BodyKind::cube;
  k.radius_ = radius;
  k.axis_support_.assign(dim, radius);
  k.corner_norm_max_ = 1.0 / radius;
  k.volume_ = std::pow(2.0 * radius, dim);
  return k;
}

ConvexBody ConvexBody::polytope(int dim,
                                std::vector<std::vector<double>> normals) {
  require(dim >= 1, errc::invalid_body, "body dimension must be positive");
  require(normals.size() >= 2, errc::invalid_body,
          "polytope needs at least one symmetric normal pair");
  require(normals.size() <= 64, errc::invalid_body,
          "polytope normal list too large");
  for (const auto& n : normals) {
    require(static_cast<int>(n.size()) == dim, errc::invalid_body,
            "polytope normal has wrong dimension");
    require(all_finite(n), errc::invalid_body, "polytope normal not finite");
    double mag = 0.0;
    for (double v : n) mag += v * v;
    require(mag > 0.0, errc::invalid_body, "polytope normal is zero");
  }
  ConvexBody k;
  k.dim_ = dim;
  k.kind_ = BodyKind::polytope;
  k.normals_ = std::move(normals);
  k.finalize_polytope();
  return k;
}

void ConvexBody::finalize_polytope() {
  const int d = dim_;
  // Closure under negation (origin symmetry of the body).
  for (const auto& n : normals_) {
    bool found = false;
    for (const auto& m : normals_) {
      double diff = 0.0;
      double mag = 0.0;
      for (int j = 0; j < d; ++j) {
        diff += (n[j] + m[j]) * (n[j] + m[j]);
        mag += n[j] * n[j];
      }
      if (diff <= 1e-18 * std::max(1.0, mag)) {
        found = true;
        break;
      }
    }
    require(found, errc::invalid_body,
            "polytope halfspace list must be closed under negation");
  }
  require(matrix_rank(normals_) == d, errc::invalid_body,
          "polytope is unbounded (normals do not span)");

  // Vertex enumeration: intersections of d facet hyperplanes that satisfy
  // every constraint.  Combinatorial, fine at the normal counts we accept.
  const int nn = static_cast<int>(normals_.size());
  double ncomb = 1.0;
  for (int j = 0; j < d; ++j)
    ncomb *= static_cast<double>(nn - j) / static_cast<double>(j + 1);
  require(ncomb <= 2e6, errc::invalid_body,
          "polytope facet count too large for this dimension");
  std::vector<int> comb(d);
  for (int j = 0; j < d; ++j) comb[j] = j;
  const auto feasible = [&](const std::vector<double>& x) {
    for (const auto& n : normals_) {
      double s = 0.0;
      for (int j = 0; j < d; ++j) s += n[j] * x[j];
      if (s > 1.0 + 1e-9) return false;
    }
    return true;
  };
  std::vector<std::vector<double>> verts;
  while (true) {
    std::vector<std::vector<double>> a(d);
    for (int j = 0; j < d; ++j) a[j] = normals_[comb[j]];
    std::vector<double> x;
    if (solve_dense(a, std::vector<double>(d, 1.0), x) && feasible(x)) {
      bool dup = false;
      for (const auto& v : verts) {
        double diff = 0.0;
        for (int j = 0; j < d; ++j) diff += (v[j] - x[j]) * (v[j] - x[j]);
        if (diff < 1e-16) {
          dup = true;
          break;
        }
      }
      if (!dup) verts.push_back(x);
    }
    int pos = d - 1;
    while (pos >= 0 && comb[pos] == nn - d + pos) --pos;
    if (pos < 0) break;
    ++comb[pos];
    for (int j = pos + 1; j < d; ++j) comb[j] = comb[j - 1] + 1;
  }
  require(!verts.empty(), errc::invalid_body, "polytope has no vertices");
  vertices_ = std::move(verts);

  axis_support_.assign(d, 0.0);
  for (const auto& v : vertices_)
    for (int j = 0; j < d; ++j)
      axis_support_[j] = std::max(axis_support_[j], std::abs(v[j]));

  corner_norm_max_ = 0.0;
  std::vector<double> corner(d, 1.0);
  for (std::uint64_t mask = 0; mask < (1ULL << d); ++mask) {
    for (int j = 0; j < d; ++j) corner[j] = (mask >> j) & 1 ? 1.0 : -1.0;
    corner_norm_max_ = std::max(corner_norm_max_, norm(corner));
  }

  // Volume: exact decomposition through dimension 3, QMC above.
  if (d == 1) {
    volume_ = 2.0 * axis_support_[0];
  } else if (d == 2) {
    std::vector<std::vector<double>> vs = vertices_;
    std::sort(vs.begin(), vs.end(),
              [](const std::vector<double>& a, const std::vector<double>& b) {
                return std::atan2(a[1], a[0]) < std::atan2(b[1], b[0]);
              });
    double area = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const auto& p = vs[i];
      const auto& q = vs[(i + 1) % vs.size()];
      area += p[0] * q[1] - q[0] * p[1];
    }
    volume_ = 0.5 * std::abs(area);
  } else if (d == 3) {
    // V = (1/3) * sum over facets of (distance to facet plane) * facet area.
    double vol = 0.0;
    for (const auto& n : normals_) {
      const double nmag = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
      std::vector<std::array<double, 2>> flat;
      // Orthonormal basis of the facet plane.
      std::array<double, 3> u{}, w{};
      const std::array<double, 3> nu{n[0] / nmag, n[1] / nmag, n[2] / nmag};
      if (std::abs(nu[0]) < 0.9) {
        u = {0.0, -nu[2], nu[1]};
      } else {
        u = {-nu[1], nu[0], 0.0};
      }
      const double umag = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
      for (auto& c : u) c /= umag;
      w = {nu[1] * u[2] - nu[2] * u[1], nu[2] * u[0] - nu[0] * u[2],
           nu[0] * u[1] - nu[1] * u[0]};
      for (const auto& v : vertices_) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j) s += n[j] * v[j];
        if (std::abs(s - 1.0) > 1e-9) continue;
        flat.push_back({v[0] * u[0] + v[1] * u[1] + v[2] * u[2],
                        v[0] * w[0] + v[1] * w[1] + v[2] * w[2]});
      }
      if (flat.size() < 3) continue;
      double cx = 0.0, cy = 0.0;
      for (const auto& p : flat) {
        cx += p[0];
        cy += p[1];
      }
      cx /= static_cast<double>(flat.size());
      cy /= static_cast<double>(flat.size());
      std::sort(flat.begin(), flat.end(),
                [&](const std::array<double, 2>& a,
                    const std::array<double, 2>& b) {
                  return std::atan2(a[1] - cy, a[0] - cx) <
                         std::atan2(b[1] - cy, b[0] - cx);
                });
      double area = 0.0;
      for (std::size_t i = 0; i < flat.size(); ++i) {
        const auto& p = flat[i];
        const auto& q = flat[(i + 1) % flat.size()];
        area += p[0] * q[1] - q[0] * p[1];
      }
      vol += 0.5 * std::abs(area) * (1.0 / nmag) / 3.0;
    }
    volume_ = vol;
  } else {
    // Low-discrepancy membership sampling over the axis-aligned hull box,
    // with a block-based confidence interval.
    const std::uint64_t nsamp = 1ULL << 18;
    const std::uint64_t nblocks = 32;
    const std::uint64_t per = nsamp / nblocks;
    qmc::Sampler sampler(d, 0x5eedULL);
    std::vector<double> u(d), x(d), blockmean(nblocks);
    double boxvol = 1.0;
    for (int j = 0; j < d; ++j) boxvol *= 2.0 * axis_support_[j];
    for (std::uint64_t blk = 0; blk < nblocks; ++blk) {
      std::uint64_t hit = 0;
      for (std::uint64_t i = 0; i < per; ++i) {
        sampler.point(blk, i, u);
        for (int j = 0; j < d; ++j)
          x[j] = (2.0 * u[j] - 1.0) * axis_support_[j];
        if (norm(x) <= 1.0) ++hit;
      }
      blockmean[blk] = static_cast<double>(hit) / static_cast<double>(per);
    }
    double mean = 0.0;
    for (double m : blockmean) mean += m;
    mean /= static_cast<double>(nblocks);
    double var = 0.0;
    for (double m : blockmean) var += (m - mean) * (m - mean);
    var /= static_cast<double>(nblocks - 1);
    const double se = std::sqrt(var / static_cast<double>(nblocks));
    volume_ = mean * boxvol;
    volume_ci_ = 3.0 * se * boxvol;
  }
}

double ConvexBody::norm(std::span<const double> x) const {
  switch (kind_) {
    case BodyKind::ball: {
      double s = 0.0;
      for (double v : x) s += v * v;
      return std::sqrt(s) / radius_;
    }
    case BodyKind::cube: {
      double s = 0.0;
      for (double v : x) s = std::max(s, std::abs(v));
      return s / radius_;
    }
    case BodyKind::polytope: {
      double s = 0.0;
      for (const auto& n : normals_) {
        double dot = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) dot += n[j] * x[j];
        s = std::max(s, dot);
      }
      return s;
    }
  }
  return 0.0;
}

double ConvexBody::axis_support(int axis) const { return axis_support_[axis]; }

double ConvexBody::corner_norm_max() const { return corner_norm_max_; }

double volume(const Domain& dom) { return dom.volume(); }
double body_volume(const ConvexBody& body) { return body.volume(); }
double norm_K(const ConvexBody& body, std::span<const double> x) {
  require(static_cast<int>(x.size()) == body.dim(), errc::invalid_argument,
          "norm_K: point dimension mismatch");
  require(all_finite(x), errc::invalid_argument, "norm_K: non-finite point");
  return body.norm(x);
}

// ---------------------------------------------------------------------------
// Boundary neighborhood measure

NeighborhoodMeasure boundary_neighborhood_measure(const Domain& dom, double h,
                                                  MeasureMethod method,
                                                  par::exec ex) {
  require(std::isfinite(h) && h > 0.0, errc::invalid_argument,
          "neighborhood width must be positive");
  const bool single_box =
      dom.kind() == DomainKind::box && dom.boxes().size() == 1;
  if (method == MeasureMethod::exact) {
    require(single_box, errc::invalid_argument,
            "exact neighborhood measure is defined for single boxes only");
  }
  if (single_box && method != MeasureMethod::grid) {
    const Box& b = dom.boxes()[0];
    double outer = 1.0;
    double inner = 1.0;
    for (const auto& s : b.sides) {
      outer *= s.width() + 2.0 * h;
      inner *= std::max(s.width() - 2.0 * h, 0.0);
    }
    return {outer - inner, "exact", 0.0};
  }

  // Grid counting over the h-inflated bounding box; the step divides every
  // axis extent exactly so flat boundary pieces align with cell boundaries.
  Box bbox = dom.bounding_box();
  const int d = dom.dim();
  std::vector<std::int64_t> ncells(d);
  std::vector<double> step(d), lo(d);
  const double target = h / 16.0;
  double cellvol = 1.0;
  double total_cells = 1.0;
  for (int j = 0; j < d; ++j) {
    lo[j] = bbox.sides[j].lo - h;
    const double extent = bbox.sides[j].width() + 2.0 * h;
    ncells[j] = static_cast<std::int64_t>(std::ceil(extent / target));
    step[j] = extent / static_cast<double>(ncells[j]);
    cellvol *= step[j];
    total_cells *= static_cast<double>(ncells[j]);
  }
  require(total_cells <= 4e8, errc::invalid_argument,
          "neighborhood grid is too fine; increase h");
  const std::int64_t n = static_cast<std::int64_t>(total_cells + 0.5);

  const std::int64_t count = par::block_count(
      static_cast<std::size_t>(n), ex,
      [&](std::size_t beg, std::size_t end) -> std::int64_t {
        std::vector<double> x(d);
        std::int64_t local = 0;
        for (std::size_t flat = beg; flat < end; ++flat) {
          std::size_t rem = flat;
          for (int j = d - 1; j >= 0; --j) {
            const std::int64_t ij = rem % ncells[j];
            rem /= ncells[j];
            x[j] = lo[j] + (static_cast<double>(ij) + 0.5) * step[j];
          }
          if (dom.boundary_distance(x) < h) ++local;
        }
        return local;
      });

  double res = 0.0;
  for (int j = 0; j < d; ++j) res = std::max(res, step[j]);
  return {static_cast<double>(count) * cellvol, "grid", res};
}

// ---------------------------------------------------------------------------
// Minkowski content

MinkowskiEstimate minkowski_content_estimate(const Domain& dom, double alpha,
                                             std::vector<double> scales,
                                             par::exec ex) {
  const int d = dom.dim();
  require(alpha >= d - 1 && alpha < d, errc::invalid_argument,
          "codimension exponent must lie in [d-1, d)");
  require(!scales.empty(), errc::invalid_argument, "no scales given");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    require(std::isfinite(scales[i]) && scales[i] > 0.0,
            errc::invalid_argument, "scales must be positive");
    if (i > 0)
      require(scales[i] < scales[i - 1], errc::invalid_argument,
              "scales must be strictly decreasing");
  }
  MinkowskiEstimate est;
  est.alpha = alpha;
  est.scales = scales;
  for (double h : scales) {
    const auto m = boundary_neighborhood_measure(dom, h, MeasureMethod::automatic, ex);
    est.ratios.push_back(m.value / (2.0 * std::pow(h, d - alpha)));
  }
  est.content = *std::max_element(est.ratios.begin(), est.ratios.end());
  const double lo = *std::min_element(est.ratios.begin(), est.ratios.end());
  if (est.content > 0.0 && (est.content - lo) / est.content > 0.10)
    est.scale_instability = true;
  return est;
}

// ---------------------------------------------------------------------------
// Inscribed cube

namespace {

// Sup-norm clearance to the domain boundary: the largest half-side of an
// axis-aligned cube centered at x that avoids every boundary facet/edge.
double sup_clearance(const Domain& dom, std::span<const double> x,
                     const std::vector<Box>& facets) {
  double g = std::numeric_limits<double>::infinity();
  if (dom.kind() == DomainKind::polygon2d) {
    const auto& vs = dom.polygon_vertices();
    const std::size_t n = vs.size();
    for (std::size_t i = 0; i < n; ++i)
      g = std::min(g, segment_distance_sup(vs[i], vs[(i + 1) % n], x[0], x[1]));
  } else {
    for (const auto& f : facets) g = std::min(g, box_distance_sup(f, x));
  }
  return g;
}

struct BnbCell {
  double ub;
  std::vector<double> center;
  double half;  // sup-norm half extent
};

struct BnbOrder {
  bool operator()(const BnbCell& a, const BnbCell& b) const {
    return a.ub < b.ub;
  }
};

// Maximize the sup-norm clearance over the domain by branch and bound; the
// clearance field is 1-Lipschitz in the sup norm, which gives the bound
// ub(cell) = g(center) + half_extent.
double max_sup_clearance(const Domain& dom, double rel_tol) {
  const std::vector<Box>& facets = dom.boundary_facets();
  const Box bbox = dom.bounding_box();
  const int d = dom.dim();

  std::priority_queue<BnbCell, std::vector<BnbCell>, BnbOrder> queue;
  std::vector<double> c0(d);
  double half0 = 0.0;
  for (int j = 0; j < d; ++j) {
    c0[j] = bbox.sides[j].mid();
    half0 = std::max(half0, 0.5 * bbox.sides[j].width());
  }
  const double g0 = sup_clearance(dom, c0, facets);
  double best = dom.contains(c0) ? g0 : 0.0;
  queue.push({g0 + half0, c0, half0});

  const double abs_floor = 1e-12 * std::max(1.0, half0);
  std::size_t iter = 0;
  std::vector<double> child(d);
  while (!queue.empty() && iter < 2000000) {
    ++iter;
    const BnbCell cell = queue.top();
    queue.pop();
    if (cell.ub <= best * (1.0 + rel_tol) + abs_floor) break;
    const double h2 = 0.5 * cell.half;
    // 2^d children.
    for (std::uint64_t mask = 0; mask < (1ULL << d); ++mask) {
      for (int j = 0; j < d; ++j)
        child[j] = cell.center[j] + (((mask >> j) & 1) ? h2 : -h2);
      const double g = sup_clearance(dom, child, facets);
      const bool inside = dom.contains(child);
      if (inside) best = std::max(best, g);
      if (!inside && g > h2) continue;  // cell entirely outside the domain
      const double ub = g + h2;
      if (ub > best * (1.0 + rel_tol) + abs_floor && h2 > abs_floor)
        queue.push({ub, child, h2});
    }
  }
  return best;
}

}  // namespace

double inscribed_cube_side(const Domain& dom) {
  if (dom.kind() == DomainKind::box) return dom.boxes()[0].min_side();
  if (dom.kind() == DomainKind::box_union) {
    // A cube may straddle touching members, so run the same clearance
    // maximization as for polygons, seeded by the exact per-member value.
    double best_half = 0.0;
    for (const auto& b : dom.boxes())
      best_half = std::max(best_half, 0.5 * b.min_side());
    const double bnb = max_sup_clearance(dom, 5e-4);
    return 2.0 * std::max(best_half, bnb);
  }
  return 2.0 * max_sup_clearance(dom, 5e-4);
}

IsoperimetricRecord polygon_isoperimetric_check(const Domain& dom) {
  require(dom.kind() == DomainKind::polygon2d, errc::invalid_argument,
          "isoperimetric check is defined for polygon domains");
  IsoperimetricRecord rec;
  rec.perimeter = dom.polygon_perimeter();
  rec.volume = dom.volume();
  rec.epsilon = inscribed_cube_side(dom);
  rec.constant_c = rec.perimeter * rec.epsilon / rec.volume;
  return rec;
}

}  // namespace specweyl::geom
