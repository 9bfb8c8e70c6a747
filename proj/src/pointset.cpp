#include "specweyl/pointset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "specweyl/error.hpp"

namespace specweyl::pts {

namespace {

bool all_finite(std::span<const double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

double fractional(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;
  return f;
}

// Smallest ladder index i with |v| <= radii[i]; -1 past the ladder.
int assign_radius(const std::vector<double>& radii, double vnorm) {
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (vnorm <= radii[i]) return static_cast<int>(i);
  return -1;
}

double example1_offset(const std::vector<double>& radii,
                       std::span<const long long> v) {
  double sq = 0.0;
  for (long long c : v) sq += static_cast<double>(c) * static_cast<double>(c);
  const double vnorm = std::sqrt(sq);
  const int i = assign_radius(radii, vnorm);
  if (i < 0) return 0.0;
  return fractional(std::sqrt(radii[i] * radii[i] - sq));
}

}  // namespace

Window make_window(geom::ConvexBody body, double radius,
                   std::vector<double> center) {
  require(std::isfinite(radius) && radius >= 0.0, errc::invalid_argument,
          "window radius must be nonnegative");
  require(static_cast<int>(center.size()) == body.dim(),
          errc::invalid_argument, "window center dimension mismatch");
  require(all_finite(center), errc::invalid_argument,
          "window center not finite");
  return Window{std::move(body), radius, std::move(center)};
}

PointSet PointSet::explicit_list(int dim,
                                 std::vector<std::vector<double>> points) {
  require(dim >= 1, errc::invalid_pointset, "dimension must be positive");
  for (const auto& p : points) {
    require(static_cast<int>(p.size()) == dim, errc::invalid_pointset,
            "explicit point has wrong dimension");
    require(all_finite(p), errc::invalid_pointset,
            "explicit point not finite");
  }
  PointSet ps;
  ps.dim_ = dim;
  ps.kind_ = SetKind::explicit_list;
  ps.points_ = std::move(points);
  return ps;
}

PointSet PointSet::lattice(int dim) {
  require(dim >= 1, errc::invalid_pointset, "dimension must be positive");
  PointSet ps;
  ps.dim_ = dim;
  ps.kind_ = SetKind::lattice;
  ps.identity_basis_ = true;
  return ps;
}

PointSet PointSet::lattice(int dim, std::vector<std::vector<double>> basis) {
  require(dim >= 1, errc::invalid_pointset, "dimension must be positive");
  require(static_cast<int>(basis.size()) == dim, errc::invalid_pointset,
          "lattice basis must be d x d");
  for (const auto& row : basis) {
    require(static_cast<int>(row.size()) == dim, errc::invalid_pointset,
            "lattice basis must be d x d");
    require(all_finite(row), errc::invalid_pointset,
            "lattice basis not finite");
  }
  // Invert by Gauss-Jordan; failure means the basis does not span.
  std::vector<std::vector<double>> a = basis;
  std::vector<std::vector<double>> inv(dim, std::vector<double>(dim, 0.0));
  for (int j = 0; j < dim; ++j) inv[j][j] = 1.0;
  for (int col = 0; col < dim; ++col) {
    int piv = col;
    for (int r = col + 1; r < dim; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    require(std::abs(a[piv][col]) > 1e-12, errc::invalid_pointset,
            "lattice basis is singular");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const double p = a[col][col];
    for (int c = 0; c < dim; ++c) {
      a[col][c] /= p;
      inv[col][c] /= p;
    }
    for (int r = 0; r < dim; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      for (int c = 0; c < dim; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  bool ident = true;
  for (int r = 0; r < dim && ident; ++r)
    for (int c = 0; c < dim && ident; ++c)
      if (basis[r][c] != (r == c ? 1.0 : 0.0)) ident = false;
  PointSet ps;
  ps.dim_ = dim;
  ps.kind_ = SetKind::lattice;
  ps.basis_ = std::move(basis);
  ps.basis_inv_ = std::move(inv);
  ps.identity_basis_ = ident;
  return ps;
}

PointSet PointSet::column_tiling(int dim, std::map<ColumnKey, double> offsets) {
  require(dim >= 1, errc::invalid_pointset, "dimension must be positive");
  for (const auto& [v, t] : offsets) {
    require(static_cast<int>(v.size()) == dim - 1, errc::invalid_offsets,
            "column key has wrong dimension");
    require(std::isfinite(t) && t >= 0.0 && t < 1.0, errc::invalid_offsets,
            "column offset must lie in [0, 1)");
  }
  PointSet ps;
  ps.dim_ = dim;
  ps.kind_ = SetKind::column_tiling;
  ps.offsets_ = std::move(offsets);
  return ps;
}

PointSet PointSet::example1(int dim, std::vector<double> radii) {
  require(dim >= 1, errc::invalid_pointset, "dimension must be positive");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(std::isfinite(radii[i]) && radii[i] >= 1.0, errc::invalid_argument,
            "ladder radii must be at least 1");
    if (i > 0)
      require(radii[i] > radii[i - 1], errc::invalid_argument,
              "ladder radii must be strictly increasing");
  }
  PointSet ps;
  ps.dim_ = dim;
  ps.kind_ = SetKind::example1;
  ps.radii_ = std::move(radii);
  return ps;
}

double PointSet::column_offset(std::span<const long long> v) const {
  require(kind_ == SetKind::column_tiling || kind_ == SetKind::example1,
          errc::invalid_argument, "column offsets exist for tiling kinds");
  require(static_cast<int>(v.size()) == dim_ - 1, errc::invalid_argument,
          "column key has wrong dimension");
  if (kind_ == SetKind::example1) return example1_offset(radii_, v);
  const ColumnKey key(v.begin(), v.end());
  auto it = offsets_.find(key);
  return it == offsets_.end() ? 0.0 : it->second;
}

// ---------------------------------------------------------------------------
// WindowIteration

WindowIteration::WindowIteration(const PointSet& ps, const Window& w)
    : ps_(&ps), w_(&w) {
  require(ps.dim() == w.body.dim(), errc::invalid_argument,
          "window body dimension mismatch");
  const int d = ps.dim();
  if (ps.kind() == SetKind::explicit_list) {
    total_ = static_cast<std::int64_t>(ps.points().size());
    return;
  }
  // Integer index box covering the window's bounding box, padded by one so
  // boundary rounding can never drop an admissible index.
  std::vector<double> lo(d), hi(d);
  for (int j = 0; j < d; ++j) {
    const double hw = w.radius * w.body.axis_support(j);
    lo[j] = w.center[j] - hw;
    hi[j] = w.center[j] + hw;
  }
  klo_.resize(d);
  size_.resize(d);
  double total = 1.0;
  if (ps.kind() == SetKind::lattice && !ps.identity_basis()) {
    // Index ranges via interval arithmetic on B^-1 applied to the box.
    const auto& inv = ps.basis_inv();
    for (int j = 0; j < d; ++j) {
      double c = 0.0, r = 0.0;
      for (int i = 0; i < d; ++i) {
        const double m = inv[j][i];
        c += m * 0.5 * (lo[i] + hi[i]);
        r += std::abs(m) * 0.5 * (hi[i] - lo[i]);
      }
      klo_[j] = static_cast<long long>(std::ceil(c - r)) - 1;
      const long long khi = static_cast<long long>(std::floor(c + r)) + 1;
      size_[j] = std::max<long long>(0, khi - klo_[j] + 1);
      total *= static_cast<double>(size_[j]);
    }
  } else {
    for (int j = 0; j < d; ++j) {
      klo_[j] = static_cast<long long>(std::ceil(lo[j])) - 1;
      const long long khi = static_cast<long long>(std::floor(hi[j])) + 1;
      size_[j] = std::max<long long>(0, khi - klo_[j] + 1);
      total *= static_cast<double>(size_[j]);
    }
  }
  require(total <= 9e15, errc::invalid_argument,
          "window candidate space too large");
  total_ = 1;
  for (int j = 0; j < d; ++j) total_ *= size_[j];
}

bool WindowIteration::candidate(std::int64_t flat, std::span<double> out) const {
  const int d = ps_->dim();
  if (ps_->kind() == SetKind::explicit_list) {
    const auto& p = ps_->points()[static_cast<std::size_t>(flat)];
    std::copy(p.begin(), p.end(), out.begin());
  } else {
    // Decode lexicographically: axis 0 is the slowest.
    std::vector<long long> k(d);
    std::int64_t rem = flat;
    for (int j = d - 1; j >= 0; --j) {
      k[j] = klo_[j] + rem % size_[j];
      rem /= size_[j];
    }
    switch (ps_->kind()) {
      case SetKind::lattice:
        if (ps_->identity_basis()) {
          for (int j = 0; j < d; ++j) out[j] = static_cast<double>(k[j]);
        } else {
          const auto& b = ps_->basis();
          for (int r = 0; r < d; ++r) {
            double s = 0.0;
            for (int c = 0; c < d; ++c)
              s += b[r][c] * static_cast<double>(k[c]);
            out[r] = s;
          }
        }
        break;
      case SetKind::column_tiling:
      case SetKind::example1: {
        const double t =
            ps_->column_offset(std::span<const long long>(k.data(), d - 1));
        for (int j = 0; j + 1 < d; ++j) out[j] = static_cast<double>(k[j]);
        out[d - 1] = static_cast<double>(k[d - 1]) + t;
        break;
      }
      default:
        break;
    }
  }
  std::vector<double> diff(d);
  for (int j = 0; j < d; ++j) diff[j] = out[j] - w_->center[j];
  return w_->body.norm(diff) <= w_->radius;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<double>> enumerate(const PointSet& ps,
                                           const Window& w) {
  WindowIteration it(ps, w);
  const int d = ps.dim();
  std::vector<std::vector<double>> pts;
  std::vector<double> buf(d);
  for (std::int64_t f = 0; f < it.candidate_count(); ++f)
    if (it.candidate(f, buf)) pts.push_back(buf);
  if (ps.kind() == SetKind::explicit_list)
    std::sort(pts.begin(), pts.end());
  return pts;
}

std::int64_t count(const PointSet& ps, const Window& w, par::exec ex) {
  WindowIteration it(ps, w);
  const int d = ps.dim();
  return par::block_count(
      static_cast<std::size_t>(it.candidate_count()), ex,
      [&](std::size_t beg, std::size_t end) -> std::int64_t {
        std::vector<double> buf(d);
        std::int64_t local = 0;
        for (std::size_t f = beg; f < end; ++f)
          if (it.candidate(static_cast<std::int64_t>(f), buf)) ++local;
        return local;
      });
}

namespace {

double min_pairwise_all(const std::vector<std::vector<double>>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < pts[i].size(); ++c) {
        const double dd = pts[i][c] - pts[j][c];
        s += dd * dd;
      }
      best = std::min(best, s);
    }
  }
  return std::sqrt(best);
}

struct CellHash {
  std::size_t operator()(const std::vector<long long>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (long long c : v) {
      h ^= static_cast<std::size_t>(c) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

double min_pairwise_bucketed(const std::vector<std::vector<double>>& pts) {
  const std::size_t d = pts[0].size();
  // Seed the cell size with an all-pairs pass over a prefix.
  std::vector<std::vector<double>> head(
      pts.begin(), pts.begin() + std::min<std::size_t>(pts.size(), 1000));
  double cell = min_pairwise_all(head);
  if (!std::isfinite(cell) || cell <= 0.0) return 0.0;

  std::unordered_map<std::vector<long long>, std::vector<std::size_t>,
                     CellHash>
      grid;
  std::vector<long long> key(d);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t c = 0; c < d; ++c)
      key[c] = static_cast<long long>(std::floor(pts[i][c] / cell));
    grid[key].push_back(i);
  }
  double best = cell * cell;
  std::vector<long long> probe(d);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t c = 0; c < d; ++c)
      key[c] = static_cast<long long>(std::floor(pts[i][c] / cell));
    // Scan the 3^d neighborhood of the cell.
    std::vector<int> off(d, -1);
    while (true) {
      for (std::size_t c = 0; c < d; ++c) probe[c] = key[c] + off[c];
      auto it = grid.find(probe);
      if (it != grid.end()) {
        for (std::size_t j : it->second) {
          if (j <= i) continue;
          double s = 0.0;
          for (std::size_t c = 0; c < d; ++c) {
            const double dd = pts[i][c] - pts[j][c];
            s += dd * dd;
          }
          best = std::min(best, s);
        }
      }
      std::size_t pos = 0;
      while (pos < d && off[pos] == 1) off[pos++] = -1;
      if (pos == d) break;
      ++off[pos];
    }
  }
  return std::sqrt(best);
}

}  // namespace

double separation(const PointSet& ps, const Window& w) {
  const auto pts = enumerate(ps, w);
  require(pts.size() >= 2, errc::undefined_separation,
          "separation needs at least two points in the window");
  if (pts.size() <= 10000) return min_pairwise_all(pts);
  return min_pairwise_bucketed(pts);
}

PointSet column_tiling_spectrum(int dim, std::map<ColumnKey, double> offsets) {
  return PointSet::column_tiling(dim, std::move(offsets));
}

PointSet construct_example1(int dim, std::vector<double> radii,
                            const Window& w) {
  require(w.body.dim() == dim, errc::invalid_argument,
          "materialization window dimension mismatch");
  return PointSet::example1(dim, std::move(radii));
}

std::vector<std::int64_t> example1_sphere_counts(
    int dim, const std::vector<double>& radii) {
  PointSet::example1(dim, radii);  // validation only
  std::vector<std::int64_t> counts(radii.size(), 0);
  if (radii.empty()) return counts;
  const int dv = dim - 1;
  const long long vmax =
      static_cast<long long>(std::floor(radii.back())) + 1;
  std::vector<long long> v(std::max(dv, 1), -vmax);
  if (dv == 0) {
    counts[0] = 1;  // the single column sits on the first sphere
    return counts;
  }
  // Odometer over v in [-vmax, vmax]^(dim-1).
  std::fill(v.begin(), v.end(), -vmax);
  while (true) {
    double sq = 0.0;
    for (int j = 0; j < dv; ++j)
      sq += static_cast<double>(v[j]) * static_cast<double>(v[j]);
    const int i = assign_radius(radii, std::sqrt(sq));
    if (i >= 0) ++counts[static_cast<std::size_t>(i)];
    int pos = dv - 1;
    while (pos >= 0 && v[pos] == vmax) v[pos--] = -vmax;
    if (pos < 0) break;
    ++v[pos];
  }
  return counts;
}

std::vector<std::vector<double>> example1_defining_vertices(
    int dim, const std::vector<double>& radii, std::size_t i) {
  PointSet::example1(dim, radii);  // validation only
  require(i < radii.size(), errc::invalid_argument,
          "sphere index out of range");
  std::vector<std::vector<double>> out;
  const int dv = dim - 1;
  const double R = radii[i];
  if (dv == 0) {
    if (i == 0) out.push_back({R});
    return out;
  }
  const long long vmax = static_cast<long long>(std::floor(R)) + 1;
  std::vector<long long> v(dv, -vmax);
  while (true) {
    double sq = 0.0;
    for (int j = 0; j < dv; ++j)
      sq += static_cast<double>(v[j]) * static_cast<double>(v[j]);
    if (assign_radius(radii, std::sqrt(sq)) == static_cast<int>(i)) {
      std::vector<double> p(dim);
      for (int j = 0; j < dv; ++j) p[j] = static_cast<double>(v[j]);
      p[dim - 1] = std::sqrt(R * R - sq);
      out.push_back(std::move(p));
    }
    int pos = dv - 1;
    while (pos >= 0 && v[pos] == vmax) v[pos--] = -vmax;
    if (pos < 0) break;
    ++v[pos];
  }
  return out;
}

namespace {

LandauDensities landau_over_centers(
    const PointSet& ps, double R,
    const std::vector<std::vector<double>>& centers, double spacing,
    par::exec ex) {
  require(!centers.empty(), errc::invalid_argument,
          "landau density needs at least one center");
  require(std::isfinite(R) && R > 0.0, errc::invalid_argument,
          "landau density radius must be positive");
  const int d = ps.dim();
  const geom::ConvexBody cube = geom::ConvexBody::cube(d);
  const std::size_t n = centers.size();
  const std::size_t nb = (n + par::kBlock - 1) / par::kBlock;
  std::vector<std::int64_t> bmax(nb, std::numeric_limits<std::int64_t>::min());
  std::vector<std::int64_t> bmin(nb, std::numeric_limits<std::int64_t>::max());
  par::for_blocks(n, ex, [&](std::size_t blk, std::size_t beg,
                             std::size_t end) {
    std::int64_t mx = std::numeric_limits<std::int64_t>::min();
    std::int64_t mn = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = beg; i < end; ++i) {
      require(static_cast<int>(centers[i].size()) == d,
              errc::invalid_argument, "landau center dimension mismatch");
      const Window w{cube, R, centers[i]};
      const std::int64_t c = count(ps, w, par::exec::seq);
      mx = std::max(mx, c);
      mn = std::min(mn, c);
    }
    bmax[blk] = mx;
    bmin[blk] = mn;
  });
  LandauDensities out;
  out.d_plus = *std::max_element(bmax.begin(), bmax.end());
  out.d_minus = *std::min_element(bmin.begin(), bmin.end());
  out.centers = n;
  out.spacing = spacing;
  out.empty_set = out.d_plus == 0;
  return out;
}

}  // namespace

LandauDensities landau_density(const PointSet& ps, double R,
                               const geom::Box& search_box, double spacing,
                               par::exec ex) {
  require(std::isfinite(spacing) && spacing > 0.0 && spacing <= 0.25,
          errc::invalid_argument,
          "landau center grid spacing must lie in (0, 0.25]");
  require(search_box.dim() == ps.dim(), errc::invalid_argument,
          "landau search box dimension mismatch");
  const int d = ps.dim();
  std::vector<long long> steps(d);
  double total = 1.0;
  for (int j = 0; j < d; ++j) {
    steps[j] = static_cast<long long>(
        std::floor(search_box.sides[j].width() / spacing + 1e-9));
    total *= static_cast<double>(steps[j] + 1);
  }
  require(total <= 1e7, errc::invalid_argument,
          "landau center grid too large");
  std::vector<std::vector<double>> centers;
  centers.reserve(static_cast<std::size_t>(total));
  std::vector<long long> idx(d, 0);
  while (true) {
    std::vector<double> c(d);
    for (int j = 0; j < d; ++j)
      c[j] = search_box.sides[j].lo + static_cast<double>(idx[j]) * spacing;
    centers.push_back(std::move(c));
    int pos = d - 1;
    while (pos >= 0 && idx[pos] == steps[pos]) idx[pos--] = 0;
    if (pos < 0) break;
    ++idx[pos];
  }
  return landau_over_centers(ps, R, centers, spacing, ex);
}

LandauDensities landau_density(const PointSet& ps, double R,
                               const std::vector<std::vector<double>>& centers,
                               par::exec ex) {
  return landau_over_centers(ps, R, centers, 0.0, ex);
}

}  // namespace specweyl::pts
