#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "qh/ball.hpp"
#include "qh/errors.hpp"

using namespace qh;
using doctest::Approx;

namespace {

// Unit disk: k(0, x) = log(1 / (1 - |x|)), so the sphere of radius r has Euclidean radius 1 - e^-r.
double disk_radius(double r) { return 1.0 - std::exp(-r); }

}  // namespace

TEST_CASE("directional radii") {
  const Point o{0.0, 0.0};
  for (double r : {0.5, 1.0, 2.0}) {
    const double th = 0.3 * r;
    CHECK(directional_radius(presets::unit_ball(), o, Point{std::cos(th), std::sin(th)}, r) ==
          Approx(disk_radius(r)).epsilon(1e-8));
  }
  // Strip: along the axis k = |x|; across it the strip looks like the disk radially.
  CHECK(directional_radius(presets::strip(), o, Point{1.0, 0.0}, 1.0) == Approx(1.0).epsilon(1e-8));
  CHECK(directional_radius(presets::strip(), o, Point{0.0, 1.0}, 1.0) == Approx(disk_radius(1.0)).epsilon(1e-8));
}

TEST_CASE("disk sphere by marching squares") {
  const DomainSpec d = presets::unit_ball();
  const DistanceField f = distance_field_around(d, Point{0.0, 0.0}, 1.0, 0.125);
  const BallContour c = ball_contour(f, 0.5, true);
  REQUIRE(c.loops.size() == 1);
  for (const auto& v : c.loops[0].vertices) CHECK(euclid(v) == Approx(disk_radius(0.5)).epsilon(1e-6));
  // One-step secants of a circle of radius R at spacing h turn by about h / R.
  CHECK(max_tangent_gap(c, 1) < 1.3 * 0.125 / disk_radius(0.5));

  const DistanceField serial = distance_field_around(d, Point{0.0, 0.0}, 1.0, 0.125, {}, {}, false);
  REQUIRE(serial.values.size() == f.values.size());
  CHECK(std::memcmp(serial.values.data(), f.values.data(), f.values.size() * sizeof(double)) == 0);

  const ConvexityReport conv = convexity_check(f, 0.5, 200, 3);
  CHECK(conv.applicable);
  CHECK(conv.violations.empty());

  CHECK_THROWS_AS(ball_contour(f, 5.0), InvalidInput);
  const DistanceField small = distance_field_around(d, Point{0.0, 0.0}, 0.5, 0.125);
  CHECK_THROWS_AS(ball_contour(small, 1.0), TruncatedContour);
}

TEST_CASE("second differences decay on a strip sphere") {
  std::vector<double> schedule{0.1, 0.05, 0.025, 0.0125};
  const SmoothnessReport rep = smoothness_profile(presets::strip(), Point{0.0, 0.0}, 1.0, 4, schedule);
  CHECK(rep.probes.size() == 4);
  CHECK(rep.rows.size() == 16);
  const SmoothnessDecay d = smoothness_decay(rep);
  CHECK(d.worst_decay < 0.5);
  CHECK(d.worst_decay > 0.0);
}

TEST_CASE("smoothness decay summary") {
  SmoothnessReport rep;
  rep.schedule = {0.1, 0.05, 0.025};
  rep.rows = {{0, "normal", {1.0, 0.5, 0.25}}, {0, "tangent", {-2.0, 0.5, 0.1}}, {1, "normal", {1.0, 0.8, 0.4}}};
  const SmoothnessDecay d = smoothness_decay(rep);
  REQUIRE(d.probe_max.size() == 2);
  CHECK(d.probe_max[0] == std::vector<double>{2.0, 0.5, 0.25});
  CHECK(d.worst_decay == Approx(0.4));
  CHECK(d.worst_growth == Approx(0.8));
}

TEST_CASE("geodesic radii meet half-plane spheres orthogonally") {
  const OrthogonalityReport rep =
      orthogonality_ratio(presets::half_plane(), Point{0.0, 1.0}, Point{0.6, 1.5}, {0.8, 0.9, 0.95});
  REQUIRE(rep.ratio.size() == 3);
  CHECK(rep.ratio.back() == Approx(1.0).epsilon(0.02));
  CHECK_THROWS_AS(orthogonality_ratio(presets::half_plane(), Point{0.0, 1.0}, Point{0.6, 1.5}, {1.2}), InvalidInput);
}

TEST_CASE("cusp-free inclusion in the disk") {
  const double r = 1.0;
  const Point y{disk_radius(r) * std::cos(0.4), disk_radius(r) * std::sin(0.4)};
  const CuspReport rep = cusp_free_check(presets::unit_ball(), Point{0.0, 0.0}, r, y, {0.3, 0.7}, 8);
  CHECK(rep.balls.size() == 2);
  CHECK(rep.violations == 0);
  CHECK_THROWS_AS(cusp_free_check(presets::unit_ball(), Point{0.0, 0.0}, r, Point{0.1, 0.0}, {0.5}), Error);
}
