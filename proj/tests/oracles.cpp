#include "oracles.hpp"

#include <cmath>

namespace oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::complex<double> simpson_step(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    std::complex<double> fa, std::complex<double> fm, std::complex<double> fb,
    std::complex<double> whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const std::complex<double> flm = f(lm), frm = f(rm);
  const std::complex<double> left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const std::complex<double> right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const std::complex<double> sum = left + right;
  if (depth <= 0 || std::abs(sum - whole) <= 15.0 * tol)
    return sum + (sum - whole) / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace

std::complex<double> simpson(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double tol) {
  const double m = 0.5 * (a + b);
  const std::complex<double> fa = f(a), fm = f(m), fb = f(b);
  const std::complex<double> whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 40);
}

std::complex<double> box_ft_quad(const specweyl::geom::Box& box,
                                 std::span<const double> xi) {
  std::complex<double> prod{1.0, 0.0};
  for (std::size_t j = 0; j < box.sides.size(); ++j) {
    const double w = xi[j];
    prod *= simpson(
        [w](double t) {
          const double ph = -2.0 * kPi * t * w;
          return std::complex<double>{std::cos(ph), std::sin(ph)};
        },
        box.sides[j].lo, box.sides[j].hi, 1e-13);
  }
  return prod;
}

std::complex<double> boxes_ft_quad(const std::vector<specweyl::geom::Box>& bs,
                                   std::span<const double> xi) {
  std::complex<double> sum{0.0, 0.0};
  for (const auto& b : bs) sum += box_ft_quad(b, xi);
  return sum;
}

std::complex<double> slabs_ft_quad(const std::vector<Slab>& slabs,
                                   std::span<const double> xi, double tol) {
  const double w1 = xi[0], w2 = xi[1];
  std::complex<double> sum{0.0, 0.0};
  for (const auto& s : slabs) {
    const auto inner = [w2, &s](double) {
      return simpson(
          [w2](double y) {
            const double ph = -2.0 * kPi * y * w2;
            return std::complex<double>{std::cos(ph), std::sin(ph)};
          },
          s.y_lo, s.y_hi, 1e-13);
    };
    // y-interval is constant across the slab, so hoist the inner integral.
    const std::complex<double> yint = inner(0.0);
    sum += yint * simpson(
                      [w1](double x) {
                        const double ph = -2.0 * kPi * x * w1;
                        return std::complex<double>{std::cos(ph),
                                                    std::sin(ph)};
                      },
                      s.x_lo, s.x_hi, tol);
  }
  return sum;
}

double tiling_sum_1d(double x, long long trunc) {
  long double acc = 0.0L;
  for (long long n = -trunc; n <= trunc; ++n) {
    const long double t = static_cast<long double>(x) - n;
    if (t == 0.0L) {
      acc += 1.0L;
      continue;
    }
    const long double s = sinl(static_cast<long double>(kPi) * t) /
                          (static_cast<long double>(kPi) * t);
    acc += s * s;
  }
  return static_cast<double>(acc);
}

std::int64_t ball_count(const std::vector<std::vector<double>>& pts,
                        std::span<const double> center, double r) {
  std::int64_t n = 0;
  for (const auto& p : pts) {
    double sq = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double d = p[j] - center[j];
      sq += d * d;
    }
    if (std::sqrt(sq) <= r) ++n;
  }
  return n;
}

std::int64_t gauss_circle_count(double r) {
  const auto m = static_cast<long long>(std::ceil(r));
  const double r2 = r * r;
  std::int64_t n = 0;
  for (long long a = -m; a <= m; ++a)
    for (long long b = -m; b <= m; ++b)
      if (static_cast<double>(a * a + b * b) <= r2) ++n;
  return n;
}

std::int64_t on_sphere_count(const std::vector<std::vector<double>>& pts,
                             double r, double tol, bool upper_half) {
  std::int64_t n = 0;
  for (const auto& p : pts) {
    if (upper_half && p.back() < 0.0) continue;
    double sq = 0.0;
    for (const double c : p) sq += c * c;
    if (std::abs(std::sqrt(sq) - r) <= tol) ++n;
  }
  return n;
}

double brute_empty_square(const std::vector<std::vector<double>>& pts,
                          const specweyl::geom::Box& box, double step) {
  const int d = box.dim();
  const auto feasible = [&](double s) {
    std::vector<std::int64_t> steps(d), idx(d, 0);
    for (int j = 0; j < d; ++j) {
      const double room = box.sides[j].width() - s;
      if (room < 0.0) return false;
      steps[j] = static_cast<std::int64_t>(std::floor(room / step)) + 1;
    }
    std::vector<double> c(d);
    while (true) {
      for (int j = 0; j < d; ++j) c[j] = box.sides[j].lo + idx[j] * step;
      bool empty = true;
      for (const auto& p : pts) {
        bool inside = true;
        for (int j = 0; j < d; ++j)
          if (!(p[j] > c[j] && p[j] < c[j] + s)) {
            inside = false;
            break;
          }
        if (inside) {
          empty = false;
          break;
        }
      }
      if (empty) return true;
      int ax = d - 1;
      while (ax >= 0 && ++idx[ax] == steps[ax]) idx[ax--] = 0;
      if (ax < 0) return false;
    }
  };

  double lo = 0.0, hi = box.min_side();
  if (feasible(hi)) return hi;
  while (hi - lo > step / 2.0) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace oracle
