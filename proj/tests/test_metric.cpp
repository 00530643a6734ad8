#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qh/errors.hpp"
#include "qh/metric.hpp"

using namespace qh;
using doctest::Approx;

namespace {

// Strip {|x2| < 1}: for y > 0 and x >= s the geodesic from the origin runs along the axis and
// leaves it tangentially on a unit circle centred on the boundary line, where the metric is
// hyperbolic. With t = 1 - y and s = sqrt(1 - t^2): k = (x - s) + atanh(s).
double strip_oracle(double x, double y) {
  const double t = 1.0 - std::abs(y), s = std::sqrt(1.0 - t * t);
  REQUIRE(std::abs(x) >= s);
  return (std::abs(x) - s) + std::atanh(s);
}

}  // namespace

TEST_CASE("closed-form oracles") {
  CHECK(halfplane_distance_oracle(Point{0.0, 1.0}, Point{0.0, std::exp(2.0)}) == Approx(2.0));
  CHECK(halfplane_distance_oracle(Point{0.0, 1.0}, Point{0.0, 1.0}) == 0.0);
  CHECK(punctured_distance_oracle(Point{-1.0, 0.0}, Point{1.0, 0.0}) == Approx(std::numbers::pi));
  CHECK(punctured_distance_oracle(Point{1.0, 0.0}, Point{2.0, 0.0}) == Approx(std::log(2.0)));
  CHECK(punctured_distance_oracle(Point{1.0, 0.0}, Point{0.0, std::exp(1.0)}) ==
        Approx(std::hypot(std::numbers::pi / 2.0, 1.0)));
  CHECK_THROWS_AS(halfplane_distance_oracle(Point{0.0, -1.0}, Point{0.0, 1.0}), DomainViolation);
}

TEST_CASE("half-plane distances match the hyperbolic metric") {
  const DomainSpec h = presets::half_plane();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.5, 2.0);
  for (int k = 0; k < 6; ++k) {
    const Point x{ux(rng), uy(rng)}, y{ux(rng), uy(rng)};
    const GeodesicResult g = qh_distance(h, x, y);
    CHECK(g.converged);
    CHECK(g.qh_length == Approx(halfplane_distance_oracle(x, y)).epsilon(1e-4));
    CHECK(g.lower_bound_gap >= -1e-9);
  }
}

TEST_CASE("punctured plane: the two half circles") {
  const DomainSpec pp = presets::punctured_plane();
  const Point x{-1.0, 0.0}, y{1.0, 0.0};
  const GeodesicResult g = qh_distance(pp, x, y);
  CHECK(g.converged);
  CHECK(g.qh_length == Approx(std::numbers::pi).epsilon(1e-3));

  const auto all = geodesic_multiplicity(pp, x, y, SolverConfig{});
  REQUIRE(all.size() == 2);
  for (const auto& r : all) CHECK(r.qh_length == Approx(std::numbers::pi).epsilon(1e-3));

  const Point u{1.0, 0.0}, v{0.0, 3.0};
  CHECK(qh_distance(pp, u, v).qh_length == Approx(punctured_distance_oracle(u, v)).epsilon(1e-3));
}

TEST_CASE("strip distances") {
  const DomainSpec s = presets::strip();
  CHECK(qh_distance(s, Point{0.0, 0.0}, Point{1.5, 0.0}).qh_length == Approx(1.5).epsilon(1e-8));
  for (const auto& [x, y] : {std::pair{3.0, 0.5}, std::pair{2.0, -0.7}}) {
    const GeodesicResult g = qh_distance(s, Point{0.0, 0.0}, Point{x, y});
    CHECK(g.converged);
    CHECK(g.qh_length == Approx(strip_oracle(x, y)).epsilon(1e-4));
  }
}

TEST_CASE("three-dimensional slab") {
  const DomainSpec s = presets::slab3d();
  CHECK(qh_distance(s, Point{0.0, 0.0, 0.0}, Point{2.0, 0.0, 0.0}).qh_length == Approx(2.0).epsilon(1e-8));
}

TEST_CASE("logarithmic lower bound") {
  const DomainSpec h = presets::half_plane();
  const Point x{0.0, 1.0}, y{3.0, 1.0};
  CHECK(qh_lower_bound(h, x, y) == Approx(std::log(4.0)));
  reset_lower_bound_tally();
  const GeodesicResult g = qh_distance(h, x, y);
  CHECK(g.qh_length >= qh_lower_bound(h, x, y));
  const LowerBoundTally t = lower_bound_tally();
  CHECK(t.solved >= 1);
  CHECK(t.violations == 0);
}

TEST_CASE("invalid input") {
  const DomainSpec s = presets::strip();
  CHECK_THROWS_AS(qh_distance(s, Point{0.0, 0.0}, Point{0.0, 2.0}), DomainViolation);
  SolverConfig bad;
  bad.vertex_budget = 0;
  CHECK_THROWS_AS(qh_distance(s, Point{0.0, 0.0}, Point{1.0, 0.0}, bad), Error);
  const GeodesicResult same = qh_distance(s, Point{0.2, 0.1}, Point{0.2, 0.1});
  CHECK(same.qh_length == 0.0);
}
