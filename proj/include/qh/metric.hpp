#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "qh/domain.hpp"
#include "qh/quadrature.hpp"

namespace qh {

struct SolverConfig {
  /// Grid cells per unit length for the shortest-path initialisation.
  double grid_resolution = 64.0;
  /// Upper bound on grid nodes; the spacing is coarsened to respect it.
  int grid_node_budget = 250000;
  /// Gauss-Seidel sweeps allowed per refinement level.
  int max_iterations = 400;
  /// Stationarity threshold on |projected gradient| * d(vertex) (dimensionless).
  double gradient_tol = 1e-8;
  /// Stationarity threshold on the relative length decrease of one sweep.
  double length_rel_tol = 1e-11;
  /// Number of segments at the finest refinement level.
  int vertex_budget = 64;
  /// Initial paths tried by geodesic_multiplicity.
  int seed_count = 4;
  /// Relative length window in which multiple geodesics count as equally short.
  double equal_length_rel_tol = 1e-4;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

struct GeodesicResult {
  Polyline path;
  double qh_length = 0.0;
  /// qh_length minus the logarithmic lower bound.
  double lower_bound_gap = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> refinement_history;
};

/// QH length of a polyline (adaptive quadrature per segment, tolerance split by length).
double qh_path_length(const DomainSpec& domain, const Polyline& path, const QuadratureConfig& q = {});

/// max over both endpoints of log(1 + |x - y| / d(endpoint)).
double qh_lower_bound(const DomainSpec& domain, const Point& x, const Point& y);

/// Process-wide record of lower_bound_gap over every path refined since the last reset.
struct LowerBoundTally {
  static constexpr double kSlack = 1e-6;
  long long solved = 0;
  long long violations = 0;  // gap < -kSlack
  double min_gap = std::numeric_limits<double>::infinity();
};
LowerBoundTally lower_bound_tally();
void reset_lower_bound_tally();

/// Hyperbolic distance in the upper half-space {x_n > 0}.
double halfplane_distance_oracle(const Point& x, const Point& y);

/// sqrt(theta^2 + log^2(|x|/|y|)) in the punctured space.
double punctured_distance_oracle(const Point& x, const Point& y);

/// Closed half-line (2-D) or half-strip (3-D) that grid paths may not cross.
/// 2-D: {origin + t*direction : t >= 0}. 3-D: {origin + s*axis + t*direction : s, t >= 0}.
struct Barrier {
  Point origin;
  Point direction;
  std::optional<Point> axis;
};

struct GridOptions {
  std::vector<Barrier> barriers;
  /// Polylines whose neighbourhood is made more expensive (multiplicity search).
  std::vector<Polyline> penalised;
  double penalty_radius = 0.0;
  double penalty_factor = 4.0;
};

struct GridInit {
  Polyline path;
  /// Length according to the grid edge weights.
  double grid_length = 0.0;
  /// Adaptive-quadrature length of the extracted path.
  double qh_length = 0.0;
  /// qh_length / grid_length.
  double consistency_factor = 1.0;
  double spacing = 0.0;
};

/// Weighted-grid shortest path from x to y (16-neighbour stencil in 2-D, 26 in 3-D).
/// Throws NoPathError when x and y land in different grid components.
GridInit grid_init(const DomainSpec& domain, const Point& x, const Point& y, const SolverConfig& s,
                   const GridOptions& options = {});

/// Descent of the QH length over free interior vertices with pinned endpoints.
GeodesicResult refine_path(const DomainSpec& domain, const Polyline& init, const SolverConfig& s,
                           const QuadratureConfig& q = {});

/// Distance and geodesic: initial path (chord on convex domains, grid otherwise) then refinement.
GeodesicResult qh_distance(const DomainSpec& domain, const Point& x, const Point& y, const SolverConfig& s = {},
                           const QuadratureConfig& q = {});

/// All distinct geodesics reachable from the seed family whose lengths are within
/// equal_length_rel_tol of the shortest.
std::vector<GeodesicResult> geodesic_multiplicity(const DomainSpec& domain, const Point& x, const Point& y,
                                                  const SolverConfig& s, const QuadratureConfig& q = {});

/// Seeds passing each removed point / ray between x and y on a prescribed side.
/// Bit k of `pattern` selects the side for the k-th obstacle in `side_obstacles` order.
std::vector<Barrier> side_barriers(const DomainSpec& domain, const Point& x, const Point& y, unsigned pattern);
/// Number of removed points / rays considered obstacles between x and y.
int side_obstacle_count(const DomainSpec& domain, const Point& x, const Point& y);

}  // namespace qh
