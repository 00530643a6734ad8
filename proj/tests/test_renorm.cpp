#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qh/errors.hpp"
#include "qh/renorm.hpp"

using namespace qh;
using doctest::Approx;

TEST_CASE("disk induced norm is a multiple of the Euclidean norm") {
  const InducedNorm m(presets::unit_ball(), 1.0);
  CHECK(m.convexity().violations.empty());
  const double rho = 1.0 - std::exp(-1.0);
  for (int k = 0; k < 12; ++k) {
    const double th = 2.0 * std::numbers::pi * k / 12 + 0.1;
    const Point x{1.7 * std::cos(th), 1.7 * std::sin(th)};
    CHECK(m(x) == Approx(1.7 / rho).epsilon(1e-6));
  }
  CHECK(minkowski_eval(m, Point{0.0, 0.0}) == 0.0);
  CHECK(ray_exit(presets::unit_ball(), Point{0.0, 0.0}, Point{0.6, 0.8}) == Approx(1.0));
}

TEST_CASE("symmetry and homogeneity are exact") {
  const InducedNorm m(presets::strip(), 1.0);
  const Point x{0.37, 0.21};
  CHECK(m(-x) == m(x));
  CHECK(m(Point{-0.37, 0.21}) == m(x));
  CHECK(m(x * 2.0) == Approx(2.0 * m(x)).epsilon(1e-12));
  // Along the axis the radius is r itself.
  CHECK(m(Point{1.0, 0.0}) == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("modulus of convexity of a Euclidean ball") {
  const InducedNorm m(presets::unit_ball(), 1.0);
  const ModulusEstimate e = modulus_estimate(m, ModulusKind::Convexity, {1.0}, 8);
  REQUIRE(e.value.size() == 1);
  CHECK(e.value[0] == Approx(1.0 - std::sqrt(0.75)).epsilon(1e-6));
}

TEST_CASE("triangle inequality on sampled pairs") {
  const InducedNorm m(presets::unit_ball(), 0.5);
  const TriangleReport t = triangle_check(m, 60, 5);
  CHECK(t.pairs == 60);
  CHECK(t.violations.empty());
  CHECK(t.max_excess < 1e-5);
}

TEST_CASE("domains without a norm") {
  CHECK_THROWS_AS(InducedNorm(presets::half_plane(), 1.0), ConfigurationError);
  CHECK_THROWS_AS(InducedNorm(presets::punctured_plane(), 1.0), ConfigurationError);
  CHECK_THROWS_AS(InducedNorm(presets::unit_ball(), -1.0), InvalidInput);
}
