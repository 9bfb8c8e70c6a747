#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <random>
#include <vector>

#include "doctest.h"
#include "specweyl/analysis.hpp"
#include "specweyl/fourier.hpp"
#include "specweyl/geometry.hpp"
#include "specweyl/parallel.hpp"
#include "specweyl/pointset.hpp"
#include "specweyl/reference.hpp"

using namespace specweyl;

namespace {

geom::Domain unit_square() {
  geom::Box b;
  b.sides = {{0.0, 1.0}, {0.0, 1.0}};
  return geom::Domain::box(std::move(b));
}

geom::Domain lshape() {
  geom::Box a, b;
  a.sides = {{0.0, 1.0}, {0.0, 2.0}};
  b.sides = {{1.0, 2.0}, {0.0, 1.0}};
  return geom::Domain::box_union({a, b});
}

struct ThreadCapGuard {
  explicit ThreadCapGuard(const char* v) {
    if (const char* old = std::getenv("SPECTRAL_WEYL_THREADS")) saved = old;
    setenv("SPECTRAL_WEYL_THREADS", v, 1);
  }
  ~ThreadCapGuard() {
    if (saved.empty())
      unsetenv("SPECTRAL_WEYL_THREADS");
    else
      setenv("SPECTRAL_WEYL_THREADS", saved.c_str(), 1);
  }
  std::string saved;
};

}  // namespace

TEST_CASE("pairwise sum: matches long double accumulation") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> xs(100001);
  long double acc = 0.0L;
  for (auto& x : xs) {
    x = u(rng);
    acc += static_cast<long double>(x);
  }
  const double got = par::pairwise_sum(xs);
  CHECK(std::abs(got - static_cast<double>(acc)) <=
        1e-12 * (1.0 + std::abs(static_cast<double>(acc))));
  CHECK(par::pairwise_sum(std::vector<double>{}) == 0.0);
  CHECK(got == par::pairwise_sum(xs));  // deterministic
}

TEST_CASE("block primitives: full disjoint coverage of the index range") {
  const std::size_t n = 3 * par::kBlock + 917;

  const double sum_ids = par::block_sum(n, par::exec::par, [](std::size_t lo,
                                                              std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += static_cast<double>(i);
    return s;
  });
  CHECK(sum_ids == 0.5 * static_cast<double>(n) * static_cast<double>(n - 1));

  const std::int64_t cnt =
      par::block_count(n, par::exec::par, [](std::size_t lo, std::size_t hi) {
        return static_cast<std::int64_t>(hi - lo);
      });
  CHECK(cnt == static_cast<std::int64_t>(n));

  std::vector<int> seen(n, 0);
  par::for_blocks(n, par::exec::seq,
                  [&](std::size_t b, std::size_t lo, std::size_t hi) {
                    CHECK(b == lo / par::kBlock);
                    for (std::size_t i = lo; i < hi; ++i) ++seen[i];
                  });
  CHECK(std::count(seen.begin(), seen.end(), 1) ==
        static_cast<std::ptrdiff_t>(n));

  // serial and parallel paths agree bit for bit on float-heavy work
  const auto wobble = [](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
      s += std::sin(static_cast<double>(i) * 0.37);
    return s;
  };
  CHECK(par::block_sum(n, par::exec::seq, wobble) ==
        par::block_sum(n, par::exec::par, wobble));
}

TEST_CASE("thread cap does not change any reported number") {
  const auto dom = unit_square();
  const auto z2 = pts::PointSet::lattice(2);
  const auto w = pts::make_window(geom::ConvexBody::ball(2), 30.0, {0.2, 0.1});
  const auto orth_w =
      pts::make_window(geom::ConvexBody::cube(2), 8.0, {0.0, 0.0});
  const fourier::PowerSpectrum f{dom};
  const auto ball = geom::ConvexBody::ball(2);

  struct Snapshot {
    std::int64_t count = 0;
    double tiling_sum = 0.0;
    double orth = 0.0;
    double shell_value = 0.0;
    double shell_err = 0.0;
    double boundary = 0.0;
  };
  const auto take = [&] {
    Snapshot s;
    s.count = pts::count(z2, w);
    s.tiling_sum =
        analysis::tiling_residual(z2, dom, geom::ConvexBody::cube(2),
                                  std::vector<double>{0.3, 0.6}, 50.0)
            .sum;
    s.orth = analysis::check_orthogonality(z2, dom, orth_w, 1e-9).max_residual;
    const auto sh = fourier::shell_integral(f, ball, 8.0, 1 << 14, 9);
    s.shell_value = sh.value;
    s.shell_err = sh.std_error;
    s.boundary = geom::boundary_neighborhood_measure(lshape(), 0.02,
                                                     geom::MeasureMethod::grid)
                     .value;
    return s;
  };

  Snapshot one, three;
  {
    ThreadCapGuard guard("1");
    one = take();
  }
  {
    ThreadCapGuard guard("3");
    three = take();
  }
  CHECK(one.count == three.count);
  CHECK(one.tiling_sum == three.tiling_sum);
  CHECK(one.orth == three.orth);
  CHECK(one.shell_value == three.shell_value);
  CHECK(one.shell_err == three.shell_err);
  CHECK(one.boundary == three.boundary);
}

TEST_CASE("reference kernels agree with the streaming implementations") {
  const auto dom = unit_square();
  const auto z2 = pts::PointSet::lattice(2);
  const auto half = pts::PointSet::lattice(2, {{0.5, 0.0}, {0.0, 0.5}});
  std::map<pts::ColumnKey, double> offs;
  offs[{0}] = 0.25;
  offs[{-2}] = 0.75;
  const auto cols = pts::PointSet::column_tiling(2, offs);
  const auto ex1 = pts::PointSet::example1(2, {10.0, 40.0});
  const auto expl = pts::PointSet::explicit_list(
      2, {{0.1, 0.2}, {1.5, -0.7}, {-2.0, 3.0}, {4.0, 4.0}});

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> uc(-2.0, 2.0);
  std::uniform_real_distribution<double> ur(0.5, 7.0);
  for (const auto* ps : {&z2, &half, &cols, &ex1, &expl}) {
    for (int it = 0; it < 20; ++it) {
      const double R = ur(rng);
      std::vector<double> c{uc(rng), uc(rng)};
      const auto w = (it % 2 == 0)
                         ? pts::make_window(geom::ConvexBody::cube(2), R, c)
                         : pts::make_window(geom::ConvexBody::ball(2), R, c);
      CHECK(ref::enumerate(*ps, w) == pts::enumerate(*ps, w));
      CHECK(ref::count(*ps, w) == pts::count(*ps, w));
    }
  }

  // truncated tiling sums: same terms, different summation tree
  for (const auto* ps : {&z2, &half, &cols}) {
    const std::vector<double> x{0.3, 0.6};
    const auto w = pts::make_window(geom::ConvexBody::cube(2), 40.0, x);
    const double serial = ref::tiling_sum(dom, *ps, w);
    const double streamed =
        analysis::tiling_residual(*ps, dom, geom::ConvexBody::cube(2), x, 40.0)
            .sum;
    CHECK(std::abs(serial - streamed) <= 1e-12 * (1.0 + serial));
  }

  // orthogonality residual: all-pairs scan vs deduped difference scan
  const auto w8 = pts::make_window(geom::ConvexBody::cube(2), 8.0, {0.0, 0.0});
  for (const auto* ps : {&z2, &cols, &ex1}) {
    const double brute =
        ref::max_orthogonality_residual(dom, ref::enumerate(*ps, w8));
    const double fast =
        analysis::check_orthogonality(*ps, dom, w8, 1e-9).max_residual;
    CHECK(std::abs(brute - fast) <= 1e-15);
  }
  const auto w1 = pts::make_window(geom::ConvexBody::cube(1), 12.0, {0.0});
  const auto stretched = pts::PointSet::lattice(1, {{0.9}});
  const auto dom1 = [] {
    geom::Box b;
    b.sides = {{0.0, 1.0}};
    return geom::Domain::box(std::move(b));
  }();
  CHECK(std::abs(ref::max_orthogonality_residual(
                     dom1, ref::enumerate(stretched, w1)) -
                 analysis::check_orthogonality(stretched, dom1, w1, 1e-9)
                     .max_residual) <= 1e-15);

  // landau densities over explicit centers
  std::vector<std::vector<double>> centers;
  for (int i = 0; i < 25; ++i)
    centers.push_back({0.04 * i, 1.0 - 0.04 * i});
  for (const auto* ps : {&z2, &half}) {
    const auto a = ref::landau_density(*ps, 2.5, centers);
    const auto b = pts::landau_density(*ps, 2.5, centers);
    CHECK(a.d_plus == b.d_plus);
    CHECK(a.d_minus == b.d_minus);
  }

  // shell integral: identical sampler, serial vs pairwise accumulation
  const fourier::PowerSpectrum f{dom};
  const auto ball = geom::ConvexBody::ball(2);
  const auto fast = fourier::norm_range_integral(f, ball, 8.0, 16.0, 1 << 14, 1);
  const auto slow = ref::norm_range_integral(f, ball, 8.0, 16.0, 1 << 14, 1);
  CHECK(fast.samples == slow.samples);
  CHECK(fast.underflow == slow.underflow);
  CHECK(std::abs(fast.value - slow.value) <= 1e-12 * (1.0 + slow.value));
  CHECK(std::abs(fast.std_error - slow.std_error) <=
        1e-12 + 1e-6 * slow.std_error);

  // boundary neighborhood grid: integer cell counts match exactly
  for (const double h : {0.05, 0.02}) {
    CHECK(ref::boundary_grid_measure(lshape(), h) ==
          geom::boundary_neighborhood_measure(lshape(), h,
                                              geom::MeasureMethod::grid)
              .value);
  }
}
