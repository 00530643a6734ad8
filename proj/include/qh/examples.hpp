#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qh/metric.hpp"

namespace qh {

struct VerdictCheck {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
  /// Recorded but not part of the verdict (claims the construction does not support).
  bool informational = false;
};

struct ExampleVerdict {
  std::string id;
  std::string claim;
  std::vector<std::pair<std::string, double>> measured;
  std::vector<VerdictCheck> checks;
  bool passed = false;
  /// Geodesics or curves worth exporting, labelled.
  std::vector<std::pair<std::string, Polyline>> paths;

  void add(VerdictCheck c);
  /// passed = every non-informational check passed.
  void finish();
};

/// The rectangle R_n minus the point row P_n and the slit columns L_n; n == 2 is the punctured plane.
DomainSpec build_omega_n(int n);

/// Endpoints -e1/2 and ((n-2) sqrt3 + 1/2) e1 of the multiplicity example.
std::pair<Point, Point> omega_endpoints(int n);

/// Solver settings used for the Omega_n geodesics: 64 (n - 1) segments, one seed per sign pattern.
SolverConfig omega_solver(int n);

struct SignGeodesic {
  /// Bit k set: the path passes the k-th removed point (left to right) above it.
  unsigned pattern = 0;
  GeodesicResult geodesic;
};

/// One refined geodesic per side pattern in {below, above}^(n-1); parallel over patterns.
std::vector<SignGeodesic> sign_geodesics(int n, const SolverConfig& s, const QuadratureConfig& q = {});

/// Verdict on a set of sign geodesics: all converged, pairwise distinct, length spread below
/// `spread_tol` (absolute), and 2^(n-1) of them.
ExampleVerdict sign_geodesics_verdict(int n, const std::vector<SignGeodesic>& found, double spread_tol = 1e-3);
ExampleVerdict enumerate_sign_geodesics(int n, const SolverConfig& s, const QuadratureConfig& q = {},
                                        double spread_tol = 1e-3);

/// Abscissae of the common points of the upper geodesic and its mirror image: the endpoints and
/// the slit columns (2k+1) sqrt3 / 2.
std::vector<double> expected_intersections(int n);

/// gamma_2 is the reflection of the upper geodesic across the x1-axis. Counts clustered
/// intersections (radius 1e-3) of the two and compares them with expected_intersections to
/// `abscissa_tol`. When an independently refined lower geodesic is given, it must lie within
/// `mirror_tol` of the reflection.
ExampleVerdict intersection_verdict(int n, const GeodesicResult& upper, const GeodesicResult* lower = nullptr,
                                    double abscissa_tol = 5e-3, double mirror_tol = 1e-3);
/// Refines the all-above geodesic and, independently, the mirror image of its seed.
ExampleVerdict verify_intersection_count(int n, const SolverConfig& s, const QuadratureConfig& q = {});

/// Corridor example: k(x, y) = t for x = (-t-1, 0), y = (-1, 0), and the geodesics from x to
/// (0, +-1) both run through y and separate afterwards.
ExampleVerdict polygon_prolongation_check(double t, const SolverConfig& s = {}, const QuadratureConfig& q = {});

/// QH length of the unit half-circle from -e1 to e1 in span{e1, (e_n + e_{n+1}) / sqrt2} (or
/// span{e1, e_n} when `diagonal` is false), integrated along the exact circle.
double l2_halfcircle_length(int n, bool diagonal = true, const QuadratureConfig& q = {});

/// Lengths for n = 2..n_max: strictly decreasing, above pi; the gap to pi between n = 3 and
/// n = n_max shrinks by `factor`. The per-step 30% shrink of the gap is recorded informationally.
ExampleVerdict l2_nongeodesic_lengths(int n_max, double factor = 3.0, const QuadratureConfig& q = {});

/// Non-unique geodesics between e1/2 + e3 and -e1/2 + e3 around the deleted axis, and the
/// sampled landscape of 1/d: no strict local maxima, and d attains at most 1/2 (1/d >= 2).
ExampleVerdict starlike3d_nonuniqueness(const SolverConfig& s = {}, const QuadratureConfig& q = {},
                                        double grid_step = 0.05);

/// Ids accepted by run_example: omega-<n>-count, omega-<n>-enumerate, polygon-<t>, l2-lengths,
/// starlike3d.
std::vector<std::string> example_ids();
ExampleVerdict run_example(const std::string& id);

}  // namespace qh
