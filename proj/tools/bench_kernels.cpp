// Parallel kernels vs. their serial reference implementations on fixed
// mid-size workloads.  Run with SPECTRAL_WEYL_THREADS set to compare scaling.
#include <benchmark/benchmark.h>

#include <vector>

#include "specweyl/analysis.hpp"
#include "specweyl/fourier.hpp"
#include "specweyl/geometry.hpp"
#include "specweyl/pointset.hpp"
#include "specweyl/reference.hpp"

namespace sw = specweyl;

namespace {

const sw::geom::Domain& unit_square() {
  static const sw::geom::Domain dom =
      sw::geom::Domain::box(sw::geom::make_box({{0.0, 1.0}, {0.0, 1.0}}));
  return dom;
}

const sw::pts::PointSet& z2() {
  static const sw::pts::PointSet ps = sw::pts::PointSet::lattice(2);
  return ps;
}

const sw::fourier::PowerSpectrum& square_spectrum() {
  static const sw::fourier::PowerSpectrum f{unit_square()};
  return f;
}

}  // namespace

static void BM_count_parallel(benchmark::State& state) {
  const auto w = sw::pts::make_window(sw::geom::ConvexBody::cube(2), 60.0,
                                      {0.25, 0.25});
  for (auto _ : state)
    benchmark::DoNotOptimize(sw::pts::count(z2(), w, sw::par::exec::par));
}
BENCHMARK(BM_count_parallel)->Unit(benchmark::kMillisecond);

static void BM_count_reference(benchmark::State& state) {
  const auto w = sw::pts::make_window(sw::geom::ConvexBody::cube(2), 60.0,
                                      {0.25, 0.25});
  for (auto _ : state) benchmark::DoNotOptimize(sw::ref::count(z2(), w));
}
BENCHMARK(BM_count_reference)->Unit(benchmark::kMillisecond);

static void BM_tiling_sum_parallel(benchmark::State& state) {
  const auto body = sw::geom::ConvexBody::cube(2);
  const auto tail = sw::fourier::tail_certificate(square_spectrum(), body,
                                                  60.0, 1 << 12);
  const std::vector<double> x{0.3, 0.7};
  for (auto _ : state)
    benchmark::DoNotOptimize(sw::analysis::tiling_residual(
        z2(), unit_square(), body, x, 60.0, &tail, 1 << 12));
}
BENCHMARK(BM_tiling_sum_parallel)->Unit(benchmark::kMillisecond);

static void BM_tiling_sum_reference(benchmark::State& state) {
  const auto w =
      sw::pts::make_window(sw::geom::ConvexBody::cube(2), 60.0, {0.3, 0.7});
  for (auto _ : state)
    benchmark::DoNotOptimize(sw::ref::tiling_sum(unit_square(), z2(), w));
}
BENCHMARK(BM_tiling_sum_reference)->Unit(benchmark::kMillisecond);

static void BM_orthogonality_parallel(benchmark::State& state) {
  const auto w = sw::pts::make_window(sw::geom::ConvexBody::cube(2), 16.0,
                                      {0.0, 0.0});
  for (auto _ : state)
    benchmark::DoNotOptimize(sw::analysis::check_orthogonality(
        z2(), unit_square(), w, 1e-9, sw::par::exec::par));
}
BENCHMARK(BM_orthogonality_parallel)->Unit(benchmark::kMillisecond);

static void BM_orthogonality_reference(benchmark::State& state) {
  const auto w = sw::pts::make_window(sw::geom::ConvexBody::cube(2), 16.0,
                                      {0.0, 0.0});
  const auto points = sw::ref::enumerate(z2(), w);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        sw::ref::max_orthogonality_residual(unit_square(), points));
}
BENCHMARK(BM_orthogonality_reference)->Unit(benchmark::kMillisecond);

static void BM_shell_integral_parallel(benchmark::State& state) {
  const auto ball = sw::geom::ConvexBody::ball(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(sw::fourier::norm_range_integral(
        square_spectrum(), ball, 8.0, 16.0, 1 << 14, 1, sw::par::exec::par));
}
BENCHMARK(BM_shell_integral_parallel)->Unit(benchmark::kMillisecond);

static void BM_shell_integral_reference(benchmark::State& state) {
  const auto ball = sw::geom::ConvexBody::ball(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(sw::ref::norm_range_integral(
        square_spectrum(), ball, 8.0, 16.0, 1 << 14, 1));
}
BENCHMARK(BM_shell_integral_reference)->Unit(benchmark::kMillisecond);

static void BM_boundary_measure_parallel(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(sw::geom::boundary_neighborhood_measure(
        unit_square(), 0.01, sw::geom::MeasureMethod::grid,
        sw::par::exec::par));
}
BENCHMARK(BM_boundary_measure_parallel)->Unit(benchmark::kMillisecond);

static void BM_boundary_measure_reference(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        sw::ref::boundary_grid_measure(unit_square(), 0.01));
}
BENCHMARK(BM_boundary_measure_reference)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
