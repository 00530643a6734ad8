#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qh/domain.hpp"
#include "qh/errors.hpp"
#include "qh/l2_example.hpp"
#include "qh/paths.hpp"
#include "qh/quadrature.hpp"

using namespace qh;
using doctest::Approx;

TEST_CASE("norms and their duals") {
  CHECK(norm_eval(NormSpec{}, Point{3.0, 4.0}) == Approx(5.0));
  const NormSpec p3 = NormSpec::pnorm(3.0);
  CHECK(norm_eval(p3, Point{1.0, -1.0}) == Approx(std::cbrt(2.0)));
  CHECK(p3.dual_exponent() == Approx(1.5));
  CHECK(dual_norm_eval(p3, Point{1.0, 1.0}) == Approx(std::pow(2.0, 1.0 / 1.5)));
  CHECK_THROWS_AS(NormSpec::pnorm(1.0), Error);
  CHECK_THROWS_AS(norm_eval(NormSpec{}, Point{NAN, 0.0}), InvalidInput);
}

TEST_CASE("distances to segments and rays") {
  const Point a{-1.0, 0.0}, b{1.0, 0.0};
  CHECK(segment_distance(NormSpec{}, Point{0.0, 1.0}, a, b) == Approx(1.0));
  CHECK(segment_distance(NormSpec{}, Point{2.0, 0.0}, a, b) == Approx(1.0));
  CHECK(segment_distance(NormSpec{}, Point{0.5, 0.5}, a, a) == Approx(std::hypot(1.5, 0.5)));
  CHECK(ray_distance(NormSpec{}, Point{-1.0, 1.0}, Point{0.0, 0.0}, Point{1.0, 0.0}) == Approx(std::sqrt(2.0)));
  CHECK(ray_distance(NormSpec{}, Point{5.0, -2.0}, Point{0.0, 0.0}, Point{1.0, 0.0}) == Approx(2.0));
}

TEST_CASE("boundary distance of the presets") {
  CHECK(presets::strip().boundary_distance(Point{7.0, 0.25}) == Approx(0.75));
  CHECK(presets::half_plane().boundary_distance(Point{3.0, 2.0}) == Approx(2.0));
  CHECK(presets::punctured_plane().boundary_distance(Point{3.0, 4.0}) == Approx(5.0));
  CHECK(presets::unit_ball().boundary_distance(Point{0.5, 0.0}) == Approx(0.5));
  CHECK(presets::box().boundary_distance(Point{0.5, 0.2}) == Approx(0.5));
  CHECK(presets::slab3d().boundary_distance(Point{1.0, -0.5, 2.0}) == Approx(0.5));
  CHECK(presets::omega_n(2).boundary_distance(Point{1.0, 0.0}) == Approx(1.0));

  CHECK_THROWS_AS(presets::strip().boundary_distance(Point{0.0, 1.0}), DomainViolation);
  CHECK_THROWS_AS(presets::punctured_plane().boundary_distance(Point{0.0, 0.0}), DomainViolation);
  CHECK(presets::strip().clearance(Point{0.0, 2.0}) <= 0.0);
}

TEST_CASE("polygon corridor has unit clearance along the axis") {
  const DomainSpec p = presets::polygon_p();
  for (double x : {-2.0, -1.5, -1.25, -1.0}) CHECK(p.boundary_distance(Point{x, 0.0}) == Approx(1.0));
  CHECK_FALSE(p.convex());
}

TEST_CASE("convexity and symmetry flags") {
  CHECK(presets::strip().convex());
  CHECK(presets::unit_ball().convex());
  CHECK_FALSE(presets::punctured_plane().convex());
  CHECK(presets::strip().centrally_symmetric());
  CHECK(presets::strip().mirror_symmetric(0));
  CHECK(presets::strip().mirror_symmetric(1));
  CHECK_FALSE(presets::half_plane().centrally_symmetric());
  CHECK(presets::half_plane().mirror_symmetric(0));

  Polygon square{{Point{0.0, 0.0}, Point{1.0, 0.0}, Point{1.0, 1.0}, Point{0.0, 1.0}}};
  Polygon ell{{Point{0.0, 0.0}, Point{2.0, 0.0}, Point{2.0, 1.0}, Point{1.0, 1.0}, Point{1.0, 2.0}, Point{0.0, 2.0}}};
  CHECK(polygon_is_convex(square));
  CHECK_FALSE(polygon_is_convex(ell));
}

TEST_CASE("preset lookup") {
  CHECK(presets::by_name("strip").name() == presets::strip().name());
  CHECK_THROWS_AS(presets::by_name("no-such-domain"), InvalidInput);
  const auto names = presets::names();
  CHECK(std::find(names.begin(), names.end(), "punctured-plane") != names.end());
}

TEST_CASE("feature pieces reproduce the clearance") {
  const DomainSpec d = presets::omega_n(4);
  const Point x{0.3, 0.4};
  double m = INFINITY;
  for (int k = 0; k < d.feature_count(); ++k) m = std::min(m, d.feature_distance(x, k));
  CHECK(m == Approx(d.clearance(x)));
}

TEST_CASE("axis point family distance") {
  SparsePoint e1{{{1, 1.0}}};
  const L2Distance a = l2_example_distance(e1, 64);
  CHECK(a.distance == Approx(1.0));
  CHECK(a.nearest_index == 0);

  SparsePoint x{{{2, 1.4}}};
  const L2Distance b = l2_example_distance(x, 64);
  CHECK(b.distance == Approx(1.4 - std::sqrt(2.0) / 2.0));
  CHECK(b.nearest_index == 2);
  CHECK(b.nearest_sign == 1);
  CHECK(l2_axis_radius(4) == Approx(std::sqrt(2.0) * 0.75));

  CHECK_THROWS_AS(l2_example_distance(SparsePoint{}, 64), DomainViolation);
}

TEST_CASE("segment and curve quadrature against closed forms") {
  const DomainSpec h = presets::half_plane();
  QuadratureConfig q;
  q.abs_tol = 1e-12;
  q.rel_tol = 1e-12;
  // Vertical: integral of dy / y from 1 to e.
  CHECK(integrate_segment(h, Point{0.0, 1.0}, Point{0.0, std::exp(1.0)}, 1e-12, q).value == Approx(1.0).epsilon(1e-10));
  CHECK(integrate_segment(h, Point{0.0, 1.0}, Point{1.0, 1.0}, 1e-12, q).value == Approx(1.0).epsilon(1e-10));
  // Quarter circle around the puncture: length pi / 2 at unit distance.
  const DomainSpec pp = presets::punctured_plane();
  const double quarter = integrate_curve(
      pp, [](double t) { return Point{std::cos(t), std::sin(t)}; }, [](double t) { return Point{-std::sin(t), std::cos(t)}; },
      0.0, std::numbers::pi / 2.0, q);
  CHECK(quarter == Approx(std::numbers::pi / 2.0).epsilon(1e-10));
  CHECK_THROWS_AS(integrate_segment(h, Point{0.0, 1.0}, Point{0.0, -1.0}, 1e-8, q), EvaluationError);
  CHECK(segment_certified(h, Point{0.0, 1.0}, Point{5.0, 0.5}));
}

TEST_CASE("polyline utilities") {
  Polyline p{{Point{0.0, 0.0}, Point{1.0, 0.0}, Point{1.0, 1.0}}};
  CHECK(polyline_length(NormSpec{}, p) == Approx(2.0));
  const Point mid = point_at_fraction(NormSpec{}, p, 0.5);
  CHECK(mid[0] == Approx(1.0));
  CHECK(mid[1] == Approx(0.0).epsilon(1e-12));
  CHECK(sup_distance(NormSpec{}, p, p) == 0.0);
  CHECK(mirrored(p, 1)[2][1] == -1.0);
  CHECK(distance_to_polyline(NormSpec{}, Point{0.5, 1.0}, p) == Approx(0.5));

  Polyline a{{Point{-1.0, -1.0}, Point{1.0, 1.0}}};
  Polyline b{{Point{-1.0, 1.0}, Point{1.0, -1.0}}};
  const auto hits = clustered_intersections(a, b, 1e-3);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0][0] == Approx(0.0).epsilon(1e-12));

  // A coarsely sampled tangential contact dips across the axis twice; it is still one contact.
  Polyline touch{{Point{-0.06, 0.003}, Point{-0.03, 1e-4}, Point{0.0, -1e-4}, Point{0.03, 1e-4}, Point{0.06, 0.003}}};
  CHECK(clustered_intersections(touch, mirrored(touch, 1), 1e-3).size() == 1);
}
