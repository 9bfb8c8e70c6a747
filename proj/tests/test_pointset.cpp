#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "specweyl/error.hpp"
#include "specweyl/fourier.hpp"
#include "specweyl/pointset.hpp"

using namespace specweyl;

namespace {

pts::Window cube_window(int d, double R, std::vector<double> c = {}) {
  if (c.empty()) c.assign(d, 0.0);
  return pts::make_window(geom::ConvexBody::cube(d), R, std::move(c));
}

pts::Window ball_window(int d, double R, std::vector<double> c = {}) {
  if (c.empty()) c.assign(d, 0.0);
  return pts::make_window(geom::ConvexBody::ball(d), R, std::move(c));
}

double brute_min_separation(const std::vector<std::vector<double>>& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      double sq = 0.0;
      for (std::size_t k = 0; k < p[i].size(); ++k) {
        const double d = p[i][k] - p[j][k];
        sq += d * d;
      }
      best = std::min(best, std::sqrt(sq));
    }
  return best;
}

}  // namespace

TEST_CASE("enumerate: integer lattice in cube and ball windows") {
  const auto z2 = pts::PointSet::lattice(2);
  const auto in_cube = pts::enumerate(z2, cube_window(2, 1.5));
  CHECK(in_cube.size() == 9);
  const auto in_ball = pts::enumerate(z2, ball_window(2, 2.0));
  CHECK(in_ball.size() == 13);  // Gauss circle count at r = 2

  // lexicographic order, no duplicates
  CHECK(std::is_sorted(in_cube.begin(), in_cube.end()));
  CHECK(std::adjacent_find(in_cube.begin(), in_cube.end()) == in_cube.end());
  CHECK(in_cube.front() == std::vector<double>{-1.0, -1.0});
  CHECK(in_cube.back() == std::vector<double>{1.0, 1.0});

  const auto one = pts::PointSet::explicit_list(2, {{0.25, -0.5}});
  const auto got = pts::enumerate(one, cube_window(2, 1.0));
  REQUIRE(got.size() == 1);
  CHECK(got[0] == std::vector<double>{0.25, -0.5});

  CHECK_THROWS_AS(pts::enumerate(z2, cube_window(3, 1.0)), const error&);
}

TEST_CASE("count: window anchors and agreement with enumerate") {
  const auto z2 = pts::PointSet::lattice(2);
  CHECK(pts::count(z2, cube_window(2, 2.5)) == 25);
  CHECK(pts::count(z2, cube_window(2, 0.0)) == 1);      // on a lattice point
  CHECK(pts::count(z2, cube_window(2, 0.0, {0.5, 0.5})) == 0);

  const auto half = pts::PointSet::lattice(2, {{0.5, 0.0}, {0.0, 0.5}});
  const auto tilted = pts::PointSet::lattice(2, {{1.0, 0.5}, {0.0, 1.0}});
  std::map<pts::ColumnKey, double> offs;
  offs[{0}] = 0.25;
  offs[{3}] = 0.75;
  const auto cols = pts::PointSet::column_tiling(2, offs);
  const auto ex1 = pts::PointSet::example1(2, {10.0, 40.0});

  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> uc(-3.0, 3.0);
  std::uniform_real_distribution<double> ur(0.0, 9.0);
  for (const auto* ps : {&z2, &half, &tilted, &cols, &ex1}) {
    for (int it = 0; it < 50; ++it) {
      const double R = ur(rng);
      std::vector<double> c{uc(rng), uc(rng)};
      const auto w = (it % 2 == 0) ? cube_window(2, R, c)
                                   : ball_window(2, R, c);
      const auto listed = pts::enumerate(*ps, w);
      CHECK(pts::count(*ps, w) == static_cast<std::int64_t>(listed.size()));
      CHECK(oracle::ball_count(listed, c, 1e18) ==
            static_cast<std::int64_t>(listed.size()));
    }
    // monotone in the window radius
    std::int64_t prev = -1;
    for (double R = 0.5; R <= 8.0; R += 0.5) {
      const auto n = pts::count(*ps, cube_window(2, R, {0.3, -0.1}));
      CHECK(n >= prev);
      prev = n;
    }
  }
}

TEST_CASE("separation: lattices, sharp spectrum, degenerate input") {
  const auto z2 = pts::PointSet::lattice(2);
  CHECK(pts::separation(z2, cube_window(2, 6.5)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  const auto half = pts::PointSet::lattice(2, {{0.5, 0.0}, {0.0, 0.5}});
  CHECK(pts::separation(half, cube_window(2, 6.0)) ==
        doctest::Approx(0.5).epsilon(1e-12));

  const auto ex1 = pts::PointSet::example1(2, {10.0, 40.0});
  const auto w = ball_window(2, 50.0);
  const double sep = pts::separation(ex1, w);
  CHECK(sep > 0.0);
  CHECK(sep <= 1.0);  // every column carries a unit arithmetic progression
  CHECK(sep == doctest::Approx(brute_min_separation(pts::enumerate(ex1, w)))
                   .epsilon(1e-12));

  const auto lonely = pts::PointSet::explicit_list(2, {{0.0, 0.0}});
  CHECK_THROWS_WITH_AS(
      (void)pts::separation(lonely, cube_window(2, 1.0)),
      doctest::Contains("separation"), const error&);
  try {
    (void)pts::separation(lonely, cube_window(2, 1.0));
  } catch (const error& e) {
    CHECK(e.code() == errc::undefined_separation);
  }
}

TEST_CASE("column tiling: offsets move single columns") {
  // no offsets: plain integer lattice
  const auto plain = pts::PointSet::column_tiling(2, {});
  const auto z2 = pts::PointSet::lattice(2);
  const auto w = cube_window(2, 3.5, {0.2, 0.1});
  CHECK(pts::enumerate(plain, w) == pts::enumerate(z2, w));

  std::map<pts::ColumnKey, double> offs;
  offs[{0}] = 0.5;
  const auto shifted = pts::PointSet::column_tiling(2, offs);
  CHECK(shifted.column_offset(std::vector<long long>{0}) == 0.5);
  CHECK(shifted.column_offset(std::vector<long long>{7}) == 0.0);
  const auto got = pts::enumerate(shifted, cube_window(2, 2.25));
  auto has = [&](double x, double y) {
    return std::find(got.begin(), got.end(), std::vector<double>{x, y}) !=
           got.end();
  };
  CHECK(has(0.0, 0.5));
  CHECK(has(0.0, -0.5));
  CHECK_FALSE(has(0.0, 0.0));
  CHECK(has(1.0, 0.0));
  CHECK(has(-1.0, 2.0));

  std::map<pts::ColumnKey, double> bad;
  bad[{1}] = 1.0;
  CHECK_THROWS_AS(pts::PointSet::column_tiling(2, bad), const error&);
  bad[{1}] = -0.25;
  CHECK_THROWS_AS(pts::PointSet::column_tiling(2, bad), const error&);
}

TEST_CASE("column tiling: cube spectrum orthogonality across columns") {
  // irrational-looking per-column shifts still leave every difference at a
  // zero of the cube power spectrum
  std::map<pts::ColumnKey, double> offs;
  for (long long v = -6; v <= 6; ++v)
    offs[{v}] = std::fmod(0.61803398874989484 * static_cast<double>(v + 7), 1.0);
  const auto ps = pts::PointSet::column_tiling(2, offs);
  const auto pts_in = pts::enumerate(ps, cube_window(2, 6.0));
  REQUIRE(pts_in.size() >= 100);

  const fourier::PowerSpectrum f{[] {
    geom::Box b;
    b.sides = {{0.0, 1.0}, {0.0, 1.0}};
    return geom::Domain::box(std::move(b));
  }()};
  std::mt19937_64 rng(113);
  std::uniform_int_distribution<std::size_t> pick(0, pts_in.size() - 1);
  for (int it = 0; it < 1000; ++it) {
    const auto& a = pts_in[pick(rng)];
    const auto& b = pts_in[pick(rng)];
    if (a == b) continue;
    const std::vector<double> diff{a[0] - b[0], a[1] - b[1]};
    CHECK(f(diff) <= 1e-18);
  }
}

TEST_CASE("sharp spectrum: defining vertices and per-sphere counts") {
  const std::vector<double> ladder{10.0, 40.0, 160.0};
  const auto counts = pts::example1_sphere_counts(2, ladder);
  REQUIRE(counts.size() == 3);
  CHECK(counts[0] == 21);
  CHECK(counts[1] == 60);
  CHECK(counts[2] == 240);

  // the column through v = 6 is shifted by the fractional part of
  // sqrt(100 - 36) = 8, i.e. not shifted at all; (6, 8) lies on the sphere
  const auto w = ball_window(2, 45.0);
  const auto ps = pts::construct_example1(2, {10.0, 40.0}, w);
  CHECK(ps.column_offset(std::vector<long long>{6}) == 0.0);
  const auto pts_in = pts::enumerate(ps, w);
  CHECK(std::find(pts_in.begin(), pts_in.end(),
                  std::vector<double>{6.0, 8.0}) != pts_in.end());

  // every defining vertex sits on its sphere to machine accuracy
  for (std::size_t i = 0; i < 2; ++i) {
    const auto verts = pts::example1_defining_vertices(2, {10.0, 40.0}, i);
    CHECK(static_cast<std::int64_t>(verts.size()) ==
          pts::example1_sphere_counts(2, {10.0, 40.0})[i]);
    const double r = i == 0 ? 10.0 : 40.0;
    for (const auto& v : verts) {
      CHECK(std::abs(std::hypot(v[0], v[1]) - r) <= 1e-9);
      CHECK(v[1] >= 0.0);
    }
  }

  // brute totals on the spheres, counting the upper half-plane only: the
  // ladder assignment plus the unshifted column over the origin
  CHECK(oracle::on_sphere_count(pts_in, 10.0, 1e-9, true) == 21);
  CHECK(oracle::on_sphere_count(pts_in, 40.0, 1e-9, true) == 61);

  // three dimensions: sphere 10 collects one vertex per integer column in
  // the disk of radius 10
  const auto c3 = pts::example1_sphere_counts(3, {10.0});
  REQUIRE(c3.size() == 1);
  CHECK(c3[0] == oracle::gauss_circle_count(10.0));
  CHECK(c3[0] == 317);
}

TEST_CASE("landau densities: lattice window counts") {
  const auto z2 = pts::PointSet::lattice(2);
  geom::Box unit;
  unit.sides = {{0.0, 1.0}, {0.0, 1.0}};

  const auto d25 = pts::landau_density(z2, 2.5, unit, 0.05);
  CHECK(d25.d_plus == 36);
  CHECK(d25.d_minus == 25);
  CHECK_FALSE(d25.empty_set);
  CHECK(d25.spacing == 0.05);

  const auto d20 = pts::landau_density(z2, 2.0, unit, 0.05);
  CHECK(d20.d_plus == 25);  // closed cube catches ties at integer centers
  CHECK(d20.d_minus == 16);

  // explicit centers reproduce the grid extremes
  const auto at = pts::landau_density(
      z2, 2.5, std::vector<std::vector<double>>{{0.0, 0.0}, {0.5, 0.5}});
  CHECK(at.d_plus == 36);
  CHECK(at.d_minus == 25);
  CHECK(at.spacing == 0.0);
  CHECK(at.centers == 2);

  const auto far = pts::PointSet::explicit_list(2, {{100.0, 100.0}});
  const auto none = pts::landau_density(far, 2.0, unit, 0.25);
  CHECK(none.d_plus == 0);
  CHECK(none.d_minus == 0);
  CHECK(none.empty_set);

  CHECK_THROWS_AS(pts::landau_density(z2, 2.0, unit, 0.0), const error&);
  CHECK_THROWS_AS(pts::landau_density(z2, 2.0, unit, 0.3), const error&);
}

TEST_CASE("translation equivariance of window counts") {
  std::mt19937_64 rng(131);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<std::vector<double>> cloud;
  for (int i = 0; i < 60; ++i) cloud.push_back({u(rng), u(rng)});
  const auto base = pts::PointSet::explicit_list(2, cloud);

  const std::vector<double> shift{0.7, -1.3};
  auto moved_pts = cloud;
  for (auto& p : moved_pts) {
    p[0] += shift[0];
    p[1] += shift[1];
  }
  const auto moved = pts::PointSet::explicit_list(2, moved_pts);

  for (int it = 0; it < 40; ++it) {
    const std::vector<double> c{u(rng), u(rng)};
    const std::vector<double> cs{c[0] + shift[0], c[1] + shift[1]};
    const double R = 0.5 + 0.5 * (u(rng) + 2.0);
    CHECK(pts::count(base, ball_window(2, R, c)) ==
          pts::count(moved, ball_window(2, R, cs)));
  }
}
