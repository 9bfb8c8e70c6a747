#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "specweyl/error.hpp"
#include "specweyl/geometry.hpp"
#include "specweyl/io.hpp"

using namespace specweyl;

namespace {

geom::Domain unit_cube(int d) {
  geom::Box b;
  for (int j = 0; j < d; ++j) b.sides.push_back({0.0, 1.0});
  return geom::Domain::box(std::move(b));
}

geom::Domain fixture_domain(const char* name) {
  return io::domain_from_json(
      io::parse_json_file(std::string(SPECWEYL_FIXTURES) + "/" + name));
}

}  // namespace

TEST_CASE("domain volume: boxes, unions, polygons") {
  for (int d = 1; d <= 3; ++d) CHECK(unit_cube(d).volume() == 1.0);

  const auto u = geom::Domain::box_union(
      {geom::make_box({{0.0, 1.0}, {0.0, 1.0}}),
       geom::make_box({{2.0, 3.0}, {0.0, 2.0}})});
  CHECK(u.volume() == doctest::Approx(3.0).epsilon(1e-14));

  const auto l = geom::Domain::polygon(
      {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
  CHECK(l.volume() == doctest::Approx(3.0).epsilon(1e-14));

  CHECK_THROWS_AS(geom::Domain::polygon({{0, 0}, {1, 1}, {2, 2}}),
                  const error&);  // zero area
  CHECK_THROWS_AS(geom::Domain::box(geom::make_box({{1.0, 1.0}})),
                  const error&);  // empty side
}

TEST_CASE("body volume: ball, cube, cross-polytope") {
  CHECK(geom::body_volume(geom::ConvexBody::ball(2)) ==
        doctest::Approx(3.14159265358979324).epsilon(1e-12));
  for (int d = 1; d <= 4; ++d)
    CHECK(geom::body_volume(geom::ConvexBody::cube(d)) ==
          doctest::Approx(std::pow(2.0, d)).epsilon(1e-14));

  const auto cross =
      geom::ConvexBody::polytope(2, {{1, 1}, {-1, -1}, {1, -1}, {-1, 1}});
  CHECK(geom::body_volume(cross) == doctest::Approx(2.0).epsilon(1e-9));

  // halfspaces that positively span only one direction: unbounded
  CHECK_THROWS_AS(geom::ConvexBody::polytope(2, {{1, 0}, {-1, 0}}),
                  const error&);
}

TEST_CASE("norm_K: values, homogeneity, triangle inequality") {
  const auto ball = geom::ConvexBody::ball(2);
  const auto box2 = geom::ConvexBody::polytope(
      2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  const std::vector<double> zero{0.0, 0.0};
  CHECK(geom::norm_K(ball, zero) == 0.0);
  CHECK(geom::norm_K(ball, std::vector<double>{3.0, 4.0}) ==
        doctest::Approx(5.0).epsilon(1e-14));
  CHECK(geom::norm_K(box2, std::vector<double>{0.5, -2.0}) ==
        doctest::Approx(2.0).epsilon(1e-14));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-5.0, 5.0), scale(-3.0, 3.0);
  const auto cube = geom::ConvexBody::cube(2, 0.75);
  for (const auto* body : {&ball, &box2, &cube}) {
    for (int it = 0; it < 1000; ++it) {
      const std::vector<double> x{coord(rng), coord(rng)};
      const std::vector<double> y{coord(rng), coord(rng)};
      const double s = scale(rng);
      const std::vector<double> sx{s * x[0], s * x[1]};
      const std::vector<double> xy{x[0] + y[0], x[1] + y[1]};
      const double nx = geom::norm_K(*body, x);
      CHECK(std::abs(geom::norm_K(*body, sx) - std::abs(s) * nx) <=
            1e-12 * (1.0 + nx));
      CHECK(geom::norm_K(*body, xy) <=
            (nx + geom::norm_K(*body, y)) * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("boundary neighborhood measure") {
  const auto sq = unit_cube(2);
  const auto exact = geom::boundary_neighborhood_measure(sq, 0.1);
  CHECK(exact.value == doctest::Approx(0.80).epsilon(1e-12));
  CHECK(exact.method == "exact");

  // grid path must agree with the inflate/deflate identity
  const auto grid001 =
      geom::boundary_neighborhood_measure(sq, 0.001, geom::MeasureMethod::grid);
  CHECK(grid001.value == doctest::Approx(0.008).epsilon(0.02));
  CHECK(grid001.resolution <= 0.001 / 16.0 + 1e-12);

  const auto interval = unit_cube(1);
  CHECK(geom::boundary_neighborhood_measure(interval, 0.1).value ==
        doctest::Approx(0.4).epsilon(1e-12));

  CHECK_THROWS_AS(geom::boundary_neighborhood_measure(sq, 0.0), const error&);
  CHECK_THROWS_AS(geom::boundary_neighborhood_measure(sq, -0.1), const error&);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lo(-2.0, 0.0), w(0.5, 3.0);
  for (int it = 0; it < 10; ++it) {
    const double a = lo(rng), b = a + w(rng);
    const double c = lo(rng), d = c + w(rng);
    const auto dom = geom::Domain::box(geom::make_box({{a, b}, {c, d}}));
    for (const double h : {0.05, 0.003}) {
      const auto ex = geom::boundary_neighborhood_measure(
          dom, h, geom::MeasureMethod::exact);
      const auto gr = geom::boundary_neighborhood_measure(
          dom, h, geom::MeasureMethod::grid);
      CHECK(gr.value == doctest::Approx(ex.value).epsilon(0.02));
    }
  }
}

TEST_CASE("minkowski content estimate") {
  const auto sq = unit_cube(2);
  const auto m1 = geom::minkowski_content_estimate(sq, 1.0, {0.1, 0.05, 0.01});
  CHECK(m1.content == doctest::Approx(4.0).epsilon(0.05));
  CHECK_FALSE(m1.scale_instability);
  // ratio spread at the true boundary dimension stays within 10%
  double rmin = m1.ratios[0], rmax = m1.ratios[0];
  for (const double r : m1.ratios) {
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  CHECK(rmax - rmin <= 0.1 * rmax);

  const auto cube3 = unit_cube(3);
  const auto m2 = geom::minkowski_content_estimate(cube3, 2.0, {0.1, 0.05});
  CHECK(m2.content == doctest::Approx(6.0).epsilon(0.08));

  const auto bad = geom::minkowski_content_estimate(sq, 1.5, {0.1, 0.05, 0.01});
  CHECK(bad.scale_instability);

  CHECK_THROWS_AS(geom::minkowski_content_estimate(sq, 1.0, {}), const error&);
  CHECK_THROWS_AS(geom::minkowski_content_estimate(sq, 2.0, {0.1}),
                  const error&);  // alpha must be < d
}

TEST_CASE("inscribed cube side") {
  CHECK(geom::inscribed_cube_side(geom::Domain::box(
            geom::make_box({{0.0, 2.0}, {0.0, 0.5}}))) == 0.5);
  CHECK(geom::inscribed_cube_side(geom::Domain::box_union(
            {geom::make_box({{0.0, 1.0}, {0.0, 1.0}}),
             geom::make_box({{2.0, 3.0}, {0.0, 2.0}})})) == 1.0);

  const auto comb = fixture_domain("comb.json");
  CHECK(geom::inscribed_cube_side(comb) == doctest::Approx(0.5).epsilon(2e-3));

  const auto square_poly = fixture_domain("square_poly.json");
  CHECK(geom::inscribed_cube_side(square_poly) ==
        doctest::Approx(1.0).epsilon(2e-3));

  // never exceeds volume^(1/d)
  for (const char* name : {"comb.json", "lshape.json", "rect_1x10.json",
                           "square_poly.json", "unit_square.json"}) {
    const auto dom = fixture_domain(name);
    CHECK(geom::inscribed_cube_side(dom) <=
          std::pow(dom.volume(), 1.0 / dom.dim()) * (1.0 + 1e-9));
  }
}

TEST_CASE("polygon isoperimetric check") {
  const auto sq = fixture_domain("square_poly.json");
  const auto rec = geom::polygon_isoperimetric_check(sq);
  CHECK(rec.perimeter == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(rec.volume == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rec.epsilon == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(rec.constant_c == doctest::Approx(4.0).epsilon(5e-3));

  const auto rect = geom::polygon_isoperimetric_check(
      fixture_domain("rect_1x10.json"));
  CHECK(rect.perimeter == doctest::Approx(22.0).epsilon(1e-12));
  CHECK(rect.volume == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(rect.constant_c == doctest::Approx(2.2).epsilon(5e-3));

  const auto comb = geom::polygon_isoperimetric_check(
      fixture_domain("comb.json"));
  CHECK(comb.perimeter >= 40.0);
  CHECK(comb.volume <= 1.0);
  CHECK(comb.constant_c >= 20.0);

  CHECK_THROWS_AS(geom::polygon_isoperimetric_check(unit_cube(2)),
                  const error&);

  // corpus floor: c >= 1/4 on every tested polygon
  for (const char* name :
       {"comb.json", "lshape.json", "rect_1x10.json", "square_poly.json"}) {
    CHECK(geom::polygon_isoperimetric_check(fixture_domain(name)).constant_c >=
          0.25);
  }
}
