#pragma once

#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qh/norm.hpp"
#include "qh/point.hpp"

namespace qh {

// ---- primitives: open sets whose intersection is the base of a domain ----

/// {x : normal . x > offset}
struct HalfSpace {
  Point normal;
  double offset = 0.0;
};

struct OpenBall {
  Point center;
  double radius = 1.0;
};

/// {x : lower < x[axis] < upper}
struct Slab {
  int axis = 1;
  double lower = -1.0;
  double upper = 1.0;
};

struct OpenBox {
  Point lower;
  Point upper;
};

/// Interior of a simple polygon (2-D only, convex or not).
struct Polygon {
  std::vector<Point> vertices;
};

/// Open neighbourhood {x : dist(x, ray) < radius} of the closed ray origin + s*direction, s >= 0.
struct Capsule {
  Point origin;
  Point direction;
  double radius = 1.0;
};

using Primitive = std::variant<HalfSpace, OpenBall, Slab, OpenBox, Polygon, Capsule>;

// ---- removals: closed sets cut out of the primitive intersection ----

struct RemovedPoint {
  Point at;
};

struct RemovedSegment {
  Point a;
  Point b;
};

struct RemovedRay {
  Point origin;
  Point direction;
};

/// The countable set {0} u {+-sqrt2 (1 - 1/i) e_i : i >= 2} of l^2, seen from the 2-plane
/// spanned by e_1 and weight_n*e_n + weight_next*e_{n+1}. Plane coordinates (u, v) embed as
/// u e_1 + v (weight_n e_n + weight_next e_{n+1}).
struct AxisPointFamily {
  int index = 2;
  double weight_n = 0.7071067811865476;
  double weight_next = 0.7071067811865476;
  int truncation = 0;  // 0: choose the smallest certified truncation automatically
};

using Removal = std::variant<RemovedPoint, RemovedSegment, RemovedRay, AxisPointFamily>;

struct Bounds {
  Point lower;
  Point upper;
  bool finite() const { return lower.finite() && upper.finite(); }
};

/// Open path-connected domain: intersection of primitives minus removals, with an exact
/// distance-to-boundary oracle. Immutable after construction.
class DomainSpec {
 public:
  DomainSpec(int dimension, NormSpec norm, std::vector<Primitive> primitives, std::vector<Removal> removals,
             std::string name = {});

  int dimension() const { return dim_; }
  const NormSpec& norm() const { return norm_; }
  const std::vector<Primitive>& primitives() const { return primitives_; }
  const std::vector<Removal>& removals() const { return removals_; }
  const std::string& name() const { return name_; }

  /// Signed clearance: d(x, boundary) for interior points, <= 0 outside or on the boundary.
  double clearance(const Point& x) const;
  /// Clearance ignoring removals (distance to the boundary of the primitive intersection).
  double primitive_clearance(const Point& x) const;

  /// The clearance is the minimum of finitely many smooth pieces: primitive faces / edges and
  /// removals. Inside the domain, clearance(x) == min_k feature_distance(x, k).
  int feature_count() const { return static_cast<int>(features_.size()); }
  double feature_distance(const Point& x, int k) const;

  bool contains(const Point& x) const;
  /// Exact d(x, boundary). Throws DomainViolation when x is not strictly inside.
  double boundary_distance(const Point& x) const;

  /// True when the domain is an intersection of convex primitives with nothing removed.
  bool convex() const { return convex_; }
  bool bounded() const { return bounds_.finite(); }
  const Bounds& bounds() const { return bounds_; }

  /// Invariance under x -> -x.
  bool centrally_symmetric() const;
  /// Invariance under the reflection x[axis] -> -x[axis].
  bool mirror_symmetric(int axis) const;

 private:
  void validate() const;
  double deepest_primitive_point() const;

  int dim_;
  NormSpec norm_;
  std::vector<Primitive> primitives_;
  std::vector<Removal> removals_;
  std::string name_;
  bool convex_ = false;
  Bounds bounds_;
  std::vector<std::pair<int, int>> features_;  // (primitive or removal entry, face index)
};

bool polygon_is_convex(const Polygon& poly);

namespace presets {

DomainSpec half_plane(int dim = 2);
DomainSpec punctured_plane(int dim = 2);
/// {-1 < x_2 < 1} in R^2.
DomainSpec strip();
/// {-1 < z_2 < 1} in R^3.
DomainSpec slab3d();
DomainSpec unit_ball(int dim = 2, NormSpec norm = {});
/// Open box (-half, half)^dim: the unit ball of the sup-norm when half = 1.
DomainSpec box(int dim = 2, double half = 1.0);
/// The eight-vertex L-shaped polygon whose corridor geodesics cannot be uniquely prolonged.
DomainSpec polygon_p();
/// Rectangle minus the point row and slit columns; n == 2 gives the punctured plane.
DomainSpec omega_n(int n);
/// Plane section of l^2 minus the axis point family; `diagonal` selects (e_n + e_{n+1})/sqrt2,
/// otherwise e_n alone.
DomainSpec l2_section(int n, bool diagonal = true);
/// Infinite capsule around the x_3 axis minus the axis ray above x_3 = 1/2.
DomainSpec starlike3d();

/// Look up a preset by name; `n` parameterises omega-n and l2-section.
DomainSpec by_name(const std::string& name, int n = 3);
std::vector<std::string> names();

}  // namespace presets

}  // namespace qh
