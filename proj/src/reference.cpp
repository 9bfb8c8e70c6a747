#include "specweyl/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specweyl/error.hpp"
#include "specweyl/qmc.hpp"

namespace specweyl::ref {

namespace {

// Generous per-axis integer ranges covering every index whose point can land
// in the window; correctness over tightness.
struct IndexCube {
  std::vector<long long> lo;
  std::vector<long long> hi;
};

IndexCube index_cube(const pts::PointSet& ps, const pts::Window& w) {
  const int d = ps.dim();
  double maxsup = 0.0;
  for (int j = 0; j < d; ++j)
    maxsup = std::max(maxsup, w.body.axis_support(j));

  std::vector<double> y(w.center.begin(), w.center.end());
  double reach = w.radius * maxsup;
  if (ps.kind() == pts::SetKind::lattice && !ps.identity_basis()) {
    const auto& inv = ps.basis_inv();
    double opn = 0.0;
    for (int j = 0; j < d; ++j) {
      double row = 0.0;
      for (int k = 0; k < d; ++k) row += std::abs(inv[j][k]);
      opn = std::max(opn, row);
    }
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += inv[j][k] * w.center[k];
      y[j] = s;
    }
    reach *= opn;
  }

  IndexCube cube;
  cube.lo.resize(d);
  cube.hi.resize(d);
  double total = 1.0;
  for (int j = 0; j < d; ++j) {
    cube.lo[j] = static_cast<long long>(std::floor(y[j] - reach)) - 2;
    cube.hi[j] = static_cast<long long>(std::ceil(y[j] + reach)) + 2;
    total *= static_cast<double>(cube.hi[j] - cube.lo[j] + 1);
  }
  require(total <= 5e8, errc::invalid_argument,
          "reference enumeration cube is too large");
  return cube;
}

}  // namespace

std::vector<std::vector<double>> enumerate(const pts::PointSet& ps,
                                           const pts::Window& w) {
  const int d = ps.dim();
  std::vector<std::vector<double>> out;

  if (ps.kind() == pts::SetKind::explicit_list) {
    std::vector<double> diff(d);
    for (const auto& p : ps.points()) {
      for (int j = 0; j < d; ++j) diff[j] = p[j] - w.center[j];
      if (w.body.norm(diff) <= w.radius) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  const IndexCube cube = index_cube(ps, w);
  std::vector<long long> m(cube.lo);
  std::vector<double> p(d), diff(d);
  while (true) {
    if (ps.kind() == pts::SetKind::lattice) {
      if (ps.identity_basis()) {
        for (int j = 0; j < d; ++j) p[j] = static_cast<double>(m[j]);
      } else {
        const auto& basis = ps.basis();
        for (int j = 0; j < d; ++j) {
          double s = 0.0;
          for (int k = 0; k < d; ++k)
            s += basis[j][k] * static_cast<double>(m[k]);
          p[j] = s;
        }
      }
    } else {
      for (int j = 0; j + 1 < d; ++j) p[j] = static_cast<double>(m[j]);
      const double t =
          ps.column_offset(std::span<const long long>(m.data(), d - 1));
      p[d - 1] = static_cast<double>(m[d - 1]) + t;
    }
    for (int j = 0; j < d; ++j) diff[j] = p[j] - w.center[j];
    if (w.body.norm(diff) <= w.radius) out.push_back(p);

    int ax = d - 1;
    while (ax >= 0) {
      if (++m[ax] <= cube.hi[ax]) break;
      m[ax] = cube.lo[ax];
      --ax;
    }
    if (ax < 0) break;
  }
  return out;
}

std::int64_t count(const pts::PointSet& ps, const pts::Window& w) {
  return static_cast<std::int64_t>(ref::enumerate(ps, w).size());
}

double tiling_sum(const geom::Domain& dom, const pts::PointSet& ps,
                  const pts::Window& w) {
  const fourier::PowerSpectrum f(dom);
  const int d = dom.dim();
  std::vector<double> diff(d);
  double sum = 0.0;
  for (const auto& p : ref::enumerate(ps, w)) {
    for (int j = 0; j < d; ++j) diff[j] = w.center[j] - p[j];
    sum += f(diff);
  }
  return sum;
}

double max_orthogonality_residual(
    const geom::Domain& dom, const std::vector<std::vector<double>>& points) {
  const fourier::PowerSpectrum f(dom);
  const int d = dom.dim();
  std::vector<double> diff(d);
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      for (int a = 0; a < d; ++a) diff[a] = points[j][a] - points[i][a];
      worst = std::max(worst, f(diff));
    }
  }
  return worst;
}

pts::LandauDensities landau_density(
    const pts::PointSet& ps, double R,
    const std::vector<std::vector<double>>& centers) {
  pts::LandauDensities res;
  res.centers = centers.size();
  if (centers.empty()) return res;
  const geom::ConvexBody cube = geom::ConvexBody::cube(ps.dim());
  std::int64_t mn = std::numeric_limits<std::int64_t>::max();
  std::int64_t mx = 0;
  for (const auto& c : centers) {
    const std::int64_t n = ref::count(ps, pts::make_window(cube, R, c));
    mn = std::min(mn, n);
    mx = std::max(mx, n);
  }
  res.d_plus = mx;
  res.d_minus = mn;
  if (mx == 0) {
    res.empty_set = true;
    res.d_minus = 0;
  }
  return res;
}

fourier::ShellEstimate norm_range_integral(const fourier::PowerSpectrum& f,
                                           const geom::ConvexBody& body,
                                           double r_lo, double r_hi,
                                           std::uint64_t samples,
                                           std::uint64_t seed) {
  const int d = body.dim();
  constexpr std::uint64_t kBlocks = 32;
  const std::uint64_t per = std::max<std::uint64_t>(1, samples / kBlocks);

  double boxvol = 1.0;
  std::vector<double> half(d);
  for (int j = 0; j < d; ++j) {
    half[j] = r_hi * body.axis_support(j);
    boxvol *= 2.0 * half[j];
  }

  const qmc::Sampler sampler(d, seed);
  std::vector<double> bmean(kBlocks);
  std::vector<double> u(d), x(d);
  bool any_nonzero = false;
  for (std::uint64_t b = 0; b < kBlocks; ++b) {
    double acc = 0.0;
    for (std::uint64_t i = 0; i < per; ++i) {
      sampler.point(b, i, u);
      for (int j = 0; j < d; ++j) x[j] = (2.0 * u[j] - 1.0) * half[j];
      const double nrm = body.norm(x);
      if (nrm > r_lo && nrm <= r_hi) {
        const double v = f(x);
        acc += v;
        if (v > 0.0) any_nonzero = true;
      }
    }
    bmean[b] = acc * boxvol / static_cast<double>(per);
  }

  double mean = 0.0;
  for (double m : bmean) mean += m;
  mean /= static_cast<double>(kBlocks);
  double var = 0.0;
  for (double m : bmean) var += (m - mean) * (m - mean);
  var /= static_cast<double>(kBlocks - 1);

  fourier::ShellEstimate est;
  est.value = mean;
  est.std_error = std::sqrt(var / static_cast<double>(kBlocks));
  est.underflow = !any_nonzero;
  est.samples = per * kBlocks;
  if (est.underflow) est.value = 0.0;
  return est;
}

double boundary_grid_measure(const geom::Domain& dom, double h) {
  require(std::isfinite(h) && h > 0.0, errc::invalid_argument,
          "neighborhood width must be positive");
  const geom::Box bbox = dom.bounding_box();
  const int d = dom.dim();
  std::vector<std::int64_t> ncells(d);
  std::vector<double> step(d), lo(d);
  const double target = h / 16.0;
  double cellvol = 1.0;
  double total = 1.0;
  for (int j = 0; j < d; ++j) {
    lo[j] = bbox.sides[j].lo - h;
    const double extent = bbox.sides[j].width() + 2.0 * h;
    ncells[j] = static_cast<std::int64_t>(std::ceil(extent / target));
    step[j] = extent / static_cast<double>(ncells[j]);
    cellvol *= step[j];
    total *= static_cast<double>(ncells[j]);
  }
  require(total <= 4e8, errc::invalid_argument,
          "neighborhood grid is too fine; increase h");

  const std::int64_t n = static_cast<std::int64_t>(total + 0.5);
  std::vector<double> x(d);
  std::int64_t count = 0;
  for (std::int64_t flat = 0; flat < n; ++flat) {
    std::int64_t rem = flat;
    for (int j = d - 1; j >= 0; --j) {
      const std::int64_t ij = rem % ncells[j];
      rem /= ncells[j];
      x[j] = lo[j] + (static_cast<double>(ij) + 0.5) * step[j];
    }
    if (dom.boundary_distance(x) < h) ++count;
  }
  return static_cast<double>(count) * cellvol;
}

}  // namespace specweyl::ref
