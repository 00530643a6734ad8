#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qh/errors.hpp"
#include "qh/examples.hpp"

using namespace qh;
using doctest::Approx;

namespace {

// Half-circle lengths in the l2 sections from 40-digit mpmath quadrature of 1 / d(theta), with
// d = min(1, |c - a_n e_n|, |c - a_{n+1} e_{n+1}|) split at the kinks (tests/oracles/l2_halfcircle.py).
constexpr double kHalfCircle2 = 3.6462757979593100;
constexpr double kHalfCircle3 = 3.4850960651428932;
constexpr double kHalfCircle12 = 3.1876457065995214;

}  // namespace

TEST_CASE("half-circle lengths in the l2 sections") {
  QuadratureConfig q;
  q.abs_tol = 1e-10;
  q.rel_tol = 1e-12;
  CHECK(l2_halfcircle_length(2, true, q) == Approx(kHalfCircle2).epsilon(1e-9));
  CHECK(l2_halfcircle_length(3, true, q) == Approx(kHalfCircle3).epsilon(1e-9));
  CHECK(l2_halfcircle_length(12, true, q) == Approx(kHalfCircle12).epsilon(1e-9));

  const ExampleVerdict v = l2_nongeodesic_lengths(12, 3.0, q);
  CHECK(v.passed);
  for (const auto& c : v.checks)
    if (!c.informational) CHECK_MESSAGE(c.passed, c.name);
}

TEST_CASE("omega construction") {
  const auto [x2, y2] = omega_endpoints(2);
  CHECK(x2 == Point{-1.0, 0.0});
  CHECK(y2 == Point{1.0, 0.0});
  const auto [x, y] = omega_endpoints(4);
  CHECK(x[0] == -0.5);
  CHECK(y[0] == Approx(2.0 * std::sqrt(3.0) + 0.5));

  const auto e = expected_intersections(5);
  REQUIRE(e.size() == 5);
  CHECK(e[1] == Approx(std::sqrt(3.0) / 2.0));
  CHECK(e[3] == Approx(5.0 * std::sqrt(3.0) / 2.0));

  const DomainSpec d = build_omega_n(3);
  CHECK(d.contains(x));
  CHECK_FALSE(d.convex());
  CHECK(omega_solver(5).vertex_budget == 256);
  CHECK(omega_solver(5).seed_count == 16);
}

TEST_CASE("verdict aggregation ignores informational checks") {
  ExampleVerdict v;
  v.add({"required", true, 1.0, 2.0});
  v.add({"recorded only", false, 3.0, 2.0, "", true});
  v.finish();
  CHECK(v.passed);
  v.add({"second requirement", false, 3.0, 2.0});
  v.finish();
  CHECK_FALSE(v.passed);
}

TEST_CASE("corridor geodesics cannot be prolonged uniquely") {
  const ExampleVerdict v = polygon_prolongation_check(0.25);
  CHECK(v.passed);
  for (const auto& c : v.checks) CHECK_MESSAGE(c.passed, c.name);
}

TEST_CASE("example registry") {
  const auto ids = example_ids();
  CHECK(ids.size() == 11);
  CHECK_THROWS_AS(run_example("omega-2-count"), InvalidInput);
  CHECK_THROWS_AS(run_example("polygon-abc"), InvalidInput);
  CHECK_THROWS_AS(run_example("nothing"), InvalidInput);
}
