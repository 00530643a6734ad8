// Serial reference vs OpenMP kernels. Thread count follows QH_THREADS (default: all cores).
#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "qh/ball.hpp"
#include "qh/parallel.hpp"
#include "qh/renorm.hpp"

using namespace qh;

namespace {

void distance_field_kernel(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const DomainSpec d = presets::unit_ball();
  for (auto _ : state) {
    const DistanceField f = distance_field_around(d, Point{0.0, 0.0}, 1.0, 0.25, {}, {}, parallel);
    benchmark::DoNotOptimize(f.values.data());
  }
  state.SetLabel(parallel ? "parallel" : "serial");
  state.counters["threads"] = parallel ? thread_cap() : 1;
}

void contour_polish_kernel(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const DistanceField f = distance_field_around(presets::unit_ball(), Point{0.0, 0.0}, 1.0, 0.25);
  for (auto _ : state) {
    const BallContour c = ball_contour(f, 1.0, true, parallel);
    benchmark::DoNotOptimize(c.loops.data());
  }
  state.SetLabel(parallel ? "parallel" : "serial");
}

void induced_radii_kernel(benchmark::State& state) {
  InducedNormOptions opt;
  opt.parallel = state.range(0) != 0;
  opt.verify_convexity = false;
  std::vector<Point> dirs;
  for (int k = 0; k < 16; ++k) {
    const double th = std::numbers::pi * (k + 0.5) / 16.0;
    dirs.push_back(Point{std::cos(th), std::sin(th)});
  }
  for (auto _ : state) {
    // A fresh norm each time so that the radius cache does not hide the work.
    const InducedNorm m(presets::box(), 1.0, {}, {}, opt);
    const std::vector<double> rho = m.radii(dirs);
    benchmark::DoNotOptimize(rho.data());
  }
  state.SetLabel(opt.parallel ? "parallel" : "serial");
}

}  // namespace

BENCHMARK(distance_field_kernel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(contour_polish_kernel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(induced_radii_kernel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
