#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qh/metric.hpp"

namespace qh {

/// k(center, .) sampled on a planar lattice. Nodes outside the domain hold NaN.
struct DistanceField {
  DomainSpec domain;
  Point center;
  Point lower;  // node (0, 0)
  double h = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;  // row-major: j * nx + i
  SolverConfig solver;
  QuadratureConfig quadrature;

  Point node(int i, int j) const { return Point{lower[0] + i * h, lower[1] + j * h}; }
  double value(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
  bool present(int i, int j) const;
};

/// Lattice of spacing h covering [lower, upper] (planar domains). Each node is an
/// independent qh_distance solve; parallel and serial runs give bit-identical values.
/// Throws FieldError when a node cannot be connected to the center.
DistanceField distance_field(const DomainSpec& domain, const Point& center, const Point& lower, const Point& upper,
                             double h, const SolverConfig& s = {}, const QuadratureConfig& q = {},
                             bool parallel = true);

/// Square window of half-width `half` around the center, clipped to the domain bounds.
DistanceField distance_field_around(const DomainSpec& domain, const Point& center, double half, double h,
                                    const SolverConfig& s = {}, const QuadratureConfig& q = {},
                                    bool parallel = true);

struct BallContour {
  double r = 0.0;
  double h = 0.0;
  /// Closed loops (last vertex repeats the first); outer loops run counterclockwise.
  std::vector<Polyline> loops;
  bool polished = false;
};

/// Marching-squares level set {k = r}. With `polish`, every crossing is moved from its linear
/// interpolant to the root of k(center, .) - r on its lattice edge. Throws TruncatedContour when
/// the level set reaches the window edge or an absent node.
BallContour ball_contour(const DistanceField& field, double r, bool polish = false, bool parallel = true);

/// Largest angle between the backward and forward secants over `window` steps of an
/// arclength resampling at spacing h; zero for a smooth curve as h -> 0, positive at a corner.
double max_tangent_gap(const BallContour& contour, int window = 5);

/// Root rho of k(center, center + rho * u) = r along the unit direction u. `hint` > 0 seeds the
/// bracket search.
double directional_radius(const DomainSpec& domain, const Point& center, const Point& u, double r,
                          const SolverConfig& s = {}, const QuadratureConfig& q = {}, double rel_tol = 1e-10,
                          double hint = 0.0);

struct SmoothnessRow {
  int probe = 0;
  std::string direction;  // normal, tangent, diagonal+, diagonal-
  std::vector<double> ratios;
};

struct SmoothnessReport {
  Point center;
  double r = 0.0;
  double exponent = 1.0;
  std::vector<Point> probes;
  /// Step sizes as fractions of d(probe, boundary), strictly decreasing.
  std::vector<double> schedule;
  std::vector<SmoothnessRow> rows;
};

/// Second differences (k(x0, x + hu) + k(x0, x - hu) - 2 k(x0, x)) / h^exponent at `probe_count`
/// sphere points (angles 2 pi j / probe_count from the center) in four directions each.
/// Requires a convex planar domain; throws ProbeRejected for probes outside the admissible annulus.
SmoothnessReport smoothness_profile(const DomainSpec& domain, const Point& center, double r, int probe_count,
                                    const std::vector<double>& schedule, const SolverConfig& s = {},
                                    const QuadratureConfig& q = {}, double exponent = 1.0, bool parallel = true);

struct SmoothnessDecay {
  /// Per probe, the largest |ratio| over its directions at each step.
  std::vector<std::vector<double>> probe_max;
  /// Worst (largest) final/initial ratio of probe_max over probes.
  double worst_decay = 0.0;
  /// Largest step-to-step growth factor of probe_max (<= 1 when every probe decreases).
  double worst_growth = 0.0;
};

SmoothnessDecay smoothness_decay(const SmoothnessReport& report);

struct ConvexityViolation {
  Point a;
  Point b;
  double k_mid = 0.0;
};

struct ConvexityReport {
  bool applicable = true;
  std::string status;
  int pairs = 0;
  std::vector<ConvexityViolation> violations;
};

/// Random pairs of field nodes inside the ball; the midpoint of each must satisfy k <= r + tol.
/// Skipped (applicable = false) on non-convex domains.
ConvexityReport convexity_check(const DistanceField& field, double r, int samples, std::uint64_t rng_seed,
                                double tol = 1e-4, bool parallel = true);

struct OrthogonalityReport {
  double r = 0.0;
  GeodesicResult geodesic;
  std::vector<double> t;
  /// d(gamma(t), sphere) / |gamma(t) - gamma(1)|.
  std::vector<double> ratio;
  /// Bound on the ratio error from the sphere-location tolerance.
  std::vector<double> error_bar;
};

/// Ratio of the distance from gamma(t) to the sphere S_k(x0, k(x0, x)) to |gamma(t) - x| along
/// the geodesic x0 -> x, t being the Euclidean arclength fraction. The sphere is located by
/// directional radii, minimised over the angle; throws ResolutionError when the location error
/// exceeds a tenth of the smallest |gamma(t) - x|.
OrthogonalityReport orthogonality_ratio(const DomainSpec& domain, const Point& x0, const Point& x,
                                        const std::vector<double>& t_schedule, const SolverConfig& s = {},
                                        const QuadratureConfig& q = {});

struct CuspBall {
  Point z;
  double u = 0.0;
  double radius = 0.0;
  int samples = 0;
  double max_k = 0.0;
  bool included = true;
};

struct CuspReport {
  double r = 0.0;
  GeodesicResult geodesic;
  std::vector<CuspBall> balls;
  int violations = 0;
};

/// For z on the geodesic x -> y at the given arclength fractions, samples the ball
/// B(z, |z - y| / (1 + u)), u = |z - y| / d(z), and checks k(x, .) < r + tol everywhere.
/// y must lie on S_k(x, r) to within `tol`; throws DependencyError if the geodesic did not converge.
CuspReport cusp_free_check(const DomainSpec& domain, const Point& x, double r, const Point& y,
                           const std::vector<double>& z_fractions, int samples_per_ball = 16, double tol = 1e-3,
                           const SolverConfig& s = {}, const QuadratureConfig& q = {}, bool parallel = true);

}  // namespace qh
