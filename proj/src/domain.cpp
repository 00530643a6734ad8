#include "qh/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qh/errors.hpp"
#include "qh/l2_example.hpp"

namespace qh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool crossing_inside(const std::vector<Point>& v, const Point& x) {
  bool inside = false;
  const std::size_t n = v.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = v[i];
    const Point& b = v[j];
    if ((a[1] > x[1]) != (b[1] > x[1])) {
      const double xc = (b[0] - a[0]) * (x[1] - a[1]) / (b[1] - a[1]) + a[0];
      if (x[0] < xc) inside = !inside;
    }
  }
  return inside;
}

double polygon_edge_distance(const NormSpec& norm, const Polygon& poly, const Point& x) {
  double best = kInf;
  const auto& v = poly.vertices;
  for (std::size_t i = 0; i < v.size(); ++i)
    best = std::min(best, segment_distance(norm, x, v[i], v[(i + 1) % v.size()]));
  return best;
}

struct PrimitiveClearance {
  const NormSpec& norm;
  const Point& x;

  double operator()(const HalfSpace& h) const { return (dot(h.normal, x) - h.offset) / dual_norm_eval(norm, h.normal); }
  double operator()(const OpenBall& b) const { return b.radius - norm_eval(norm, x - b.center); }
  double operator()(const Slab& s) const { return std::min(x[s.axis] - s.lower, s.upper - x[s.axis]); }
  double operator()(const OpenBox& b) const {
    double c = kInf;
    for (int i = 0; i < x.dim(); ++i) c = std::min({c, x[i] - b.lower[i], b.upper[i] - x[i]});
    return c;
  }
  double operator()(const Polygon& p) const {
    const double d = polygon_edge_distance(norm, p, x);
    return crossing_inside(p.vertices, x) ? d : -d;
  }
  double operator()(const Capsule& c) const { return c.radius - ray_distance(norm, x, c.origin, c.direction); }
};

SparsePoint embed(const AxisPointFamily& f, const Point& x) {
  SparsePoint s;
  s.entries = {{1, x[0]}, {f.index, x[1] * f.weight_n}, {f.index + 1, x[1] * f.weight_next}};
  return s;
}

struct RemovalDistance {
  const NormSpec& norm;
  const Point& x;

  double operator()(const RemovedPoint& p) const { return norm_eval(norm, x - p.at); }
  double operator()(const RemovedSegment& s) const { return segment_distance(norm, x, s.a, s.b); }
  double operator()(const RemovedRay& r) const { return ray_distance(norm, x, r.origin, r.direction); }
  double operator()(const AxisPointFamily& f) const {
    const SparsePoint s = embed(f, x);
    if (s.norm2() == 0.0) return 0.0;
    const int trunc = f.truncation > 0 ? f.truncation : f.index + 2;
    try {
      return l2_example_distance(s, trunc).distance;
    } catch (const DomainViolation&) {
      return 0.0;
    }
  }
};

Bounds primitive_bounds(int dim, const NormSpec& norm, const Primitive& p) {
  Bounds b{Point(dim), Point(dim)};
  for (int i = 0; i < dim; ++i) {
    b.lower[i] = -kInf;
    b.upper[i] = kInf;
  }
  // p-norm balls of radius R are contained in the sup-norm box of radius R.
  (void)norm;
  std::visit(
      [&](const auto& q) {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, OpenBall>) {
          for (int i = 0; i < dim; ++i) {
            b.lower[i] = q.center[i] - q.radius;
            b.upper[i] = q.center[i] + q.radius;
          }
        } else if constexpr (std::is_same_v<T, Slab>) {
          b.lower[q.axis] = q.lower;
          b.upper[q.axis] = q.upper;
        } else if constexpr (std::is_same_v<T, OpenBox>) {
          b.lower = q.lower;
          b.upper = q.upper;
        } else if constexpr (std::is_same_v<T, Polygon>) {
          for (int i = 0; i < dim; ++i) {
            b.lower[i] = kInf;
            b.upper[i] = -kInf;
          }
          for (const auto& v : q.vertices)
            for (int i = 0; i < dim; ++i) {
              b.lower[i] = std::min(b.lower[i], v[i]);
              b.upper[i] = std::max(b.upper[i], v[i]);
            }
        } else if constexpr (std::is_same_v<T, Capsule>) {
          for (int i = 0; i < dim; ++i) {
            const double o = q.origin[i];
            b.lower[i] = q.direction[i] < 0 ? -kInf : o - q.radius;
            b.upper[i] = q.direction[i] > 0 ? kInf : o + q.radius;
          }
        } else if constexpr (std::is_same_v<T, HalfSpace>) {
          // Axis-aligned half-spaces bound one coordinate.
          int nz = 0, axis = -1;
          for (int i = 0; i < dim; ++i)
            if (q.normal[i] != 0.0) ++nz, axis = i;
          if (nz == 1) {
            const double t = q.offset / q.normal[axis];
            if (q.normal[axis] > 0) b.lower[axis] = t;
            else b.upper[axis] = t;
          }
        }
      },
      p);
  return b;
}

bool primitive_convex(const Primitive& p) {
  if (const auto* poly = std::get_if<Polygon>(&p)) return polygon_is_convex(*poly);
  return true;
}

bool segments_cross(const Point& a, const Point& b, const Point& c, const Point& d) {
  auto orient = [](const Point& p, const Point& q, const Point& r) {
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
  };
  const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

// ---- symmetry helpers ----

using Map = Point (*)(const Point&, int);

Point negate(const Point& p, int) { return -p; }
Point reflect(const Point& p, int axis) {
  Point q = p;
  q[axis] = -q[axis];
  return q;
}

bool near(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) return false;
  for (int i = 0; i < a.dim(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-12 * (1.0 + std::abs(a[i]))) return false;
  return true;
}
bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)); }

bool same_point_set(std::vector<Point> a, std::vector<Point> b) {
  if (a.size() != b.size()) return false;
  for (const auto& p : a) {
    auto it = std::find_if(b.begin(), b.end(), [&](const Point& q) { return near(p, q); });
    if (it == b.end()) return false;
    b.erase(it);
  }
  return true;
}

// Image of a primitive under a linear isometry of coordinates (negation or axis reflection).
Primitive map_primitive(const Primitive& p, Map m, int axis) {
  return std::visit(
      [&](const auto& q) -> Primitive {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, HalfSpace>) {
          return HalfSpace{m(q.normal, axis), q.offset};
        } else if constexpr (std::is_same_v<T, OpenBall>) {
          return OpenBall{m(q.center, axis), q.radius};
        } else if constexpr (std::is_same_v<T, Slab>) {
          const bool flips = m == &negate || q.axis == axis;
          return flips ? Slab{q.axis, -q.upper, -q.lower} : q;
        } else if constexpr (std::is_same_v<T, OpenBox>) {
          Point a = m(q.lower, axis), b = m(q.upper, axis);
          Point lo(a.dim()), hi(a.dim());
          for (int i = 0; i < a.dim(); ++i) lo[i] = std::min(a[i], b[i]), hi[i] = std::max(a[i], b[i]);
          return OpenBox{lo, hi};
        } else if constexpr (std::is_same_v<T, Polygon>) {
          Polygon out;
          for (const auto& v : q.vertices) out.vertices.push_back(m(v, axis));
          return out;
        } else {
          return Capsule{m(q.origin, axis), m(q.direction, axis), q.radius};
        }
      },
      p);
}

bool same_primitive(const Primitive& a, const Primitive& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& q) -> bool {
        using T = std::decay_t<decltype(q)>;
        const auto& r = std::get<T>(b);
        if constexpr (std::is_same_v<T, HalfSpace>) return near(q.normal, r.normal) && near(q.offset, r.offset);
        else if constexpr (std::is_same_v<T, OpenBall>) return near(q.center, r.center) && near(q.radius, r.radius);
        else if constexpr (std::is_same_v<T, Slab>) return q.axis == r.axis && near(q.lower, r.lower) && near(q.upper, r.upper);
        else if constexpr (std::is_same_v<T, OpenBox>) return near(q.lower, r.lower) && near(q.upper, r.upper);
        else if constexpr (std::is_same_v<T, Polygon>) return same_point_set(q.vertices, r.vertices);
        else return near(q.origin, r.origin) && near(q.direction, r.direction) && near(q.radius, r.radius);
      },
      a);
}

// Removed sets represented as point samples plus segment/ray descriptors for comparison.
bool same_removals(const std::vector<Removal>& rs, Map m, int axis) {
  std::vector<Point> pts, pts_img;
  std::vector<std::pair<Point, Point>> segs, segs_img;
  for (const auto& r : rs) {
    if (const auto* p = std::get_if<RemovedPoint>(&r)) {
      pts.push_back(p->at);
      pts_img.push_back(m(p->at, axis));
    } else if (const auto* s = std::get_if<RemovedSegment>(&r)) {
      segs.push_back({s->a, s->b});
      segs_img.push_back({m(s->a, axis), m(s->b, axis)});
    } else if (const auto* ray = std::get_if<RemovedRay>(&r)) {
      // a ray maps to itself only if it lies in the fixed set of the map
      const Point o = m(ray->origin, axis), d = m(ray->direction, axis);
      if (!near(o, ray->origin) || !near(d, ray->direction)) return false;
    }
    // AxisPointFamily is invariant under every coordinate sign change.
  }
  if (!same_point_set(pts, pts_img)) return false;
  for (const auto& [a, b] : segs_img) {
    auto match = [&](const std::pair<Point, Point>& s) {
      return (near(s.first, a) && near(s.second, b)) || (near(s.first, b) && near(s.second, a));
    };
    if (std::none_of(segs.begin(), segs.end(), match)) return false;
  }
  return true;
}

bool invariant_under(const DomainSpec& d, Map m, int axis) {
  for (const auto& p : d.primitives()) {
    const Primitive img = map_primitive(p, m, axis);
    if (std::none_of(d.primitives().begin(), d.primitives().end(),
                     [&](const Primitive& q) { return same_primitive(img, q); }))
      return false;
  }
  return same_removals(d.removals(), m, axis);
}

}  // namespace

bool polygon_is_convex(const Polygon& poly) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  int sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % n];
    const Point& c = v[(i + 2) % n];
    const double cr = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
    if (cr == 0.0) continue;
    const int s = cr > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    else if (s != sign) return false;
  }
  return true;
}

DomainSpec::DomainSpec(int dimension, NormSpec norm, std::vector<Primitive> primitives,
                       std::vector<Removal> removals, std::string name)
    : dim_(dimension),
      norm_(norm),
      primitives_(std::move(primitives)),
      removals_(std::move(removals)),
      name_(std::move(name)) {
  validate();
  convex_ = removals_.empty() &&
            std::all_of(primitives_.begin(), primitives_.end(), [](const Primitive& p) { return primitive_convex(p); });
  bounds_ = Bounds{Point(dim_), Point(dim_)};
  for (int i = 0; i < dim_; ++i) {
    bounds_.lower[i] = -kInf;
    bounds_.upper[i] = kInf;
  }
  for (const auto& p : primitives_) {
    const Bounds b = primitive_bounds(dim_, norm_, p);
    for (int i = 0; i < dim_; ++i) {
      bounds_.lower[i] = std::max(bounds_.lower[i], b.lower[i]);
      bounds_.upper[i] = std::min(bounds_.upper[i], b.upper[i]);
    }
  }
  for (std::size_t e = 0; e < primitives_.size(); ++e) {
    int parts = 1;
    if (std::holds_alternative<Slab>(primitives_[e])) parts = 2;
    if (std::holds_alternative<OpenBox>(primitives_[e])) parts = 2 * dim_;
    if (const auto* poly = std::get_if<Polygon>(&primitives_[e])) parts = static_cast<int>(poly->vertices.size());
    for (int k = 0; k < parts; ++k) features_.emplace_back(static_cast<int>(e), k);
  }
  for (std::size_t r = 0; r < removals_.size(); ++r)
    features_.emplace_back(static_cast<int>(primitives_.size() + r), 0);
}

double DomainSpec::feature_distance(const Point& x, int k) const {
  const auto [entry, part] = features_.at(static_cast<std::size_t>(k));
  if (static_cast<std::size_t>(entry) >= primitives_.size())
    return std::visit(RemovalDistance{norm_, x}, removals_[entry - primitives_.size()]);
  const Primitive& p = primitives_[entry];
  if (const auto* s = std::get_if<Slab>(&p)) return part == 0 ? x[s->axis] - s->lower : s->upper - x[s->axis];
  if (const auto* b = std::get_if<OpenBox>(&p)) {
    const int axis = part / 2;
    return part % 2 == 0 ? x[axis] - b->lower[axis] : b->upper[axis] - x[axis];
  }
  if (const auto* poly = std::get_if<Polygon>(&p)) {
    const auto& v = poly->vertices;
    return segment_distance(norm_, x, v[part], v[(part + 1) % v.size()]);
  }
  return std::visit(PrimitiveClearance{norm_, x}, p);
}

void DomainSpec::validate() const {
  if (dim_ < 2 || dim_ > Point::kMaxDim) throw InvalidInput("domain dimension must be 2 or 3");
  if (norm_.kind == NormSpec::Kind::PNorm && !(norm_.p > 1.0)) throw InvalidInput("norm.p must exceed 1");
  if (primitives_.empty() && removals_.empty()) throw InvalidInput("domain has empty boundary (no primitives, no removals)");
  auto check_dim = [&](const Point& p, const char* what) {
    if (p.dim() != dim_) throw InvalidInput(std::string(what) + ": dimension mismatch");
    if (!p.finite()) throw InvalidInput(std::string(what) + ": non-finite coordinate");
  };
  for (const auto& prim : primitives_) {
    std::visit(
        [&](const auto& q) {
          using T = std::decay_t<decltype(q)>;
          if constexpr (std::is_same_v<T, HalfSpace>) {
            check_dim(q.normal, "half-space normal");
            if (euclid(q.normal) == 0.0) throw InvalidInput("half-space normal is zero");
          } else if constexpr (std::is_same_v<T, OpenBall>) {
            check_dim(q.center, "ball center");
            if (!(q.radius > 0.0)) throw InvalidInput("ball radius must be positive");
          } else if constexpr (std::is_same_v<T, Slab>) {
            if (q.axis < 0 || q.axis >= dim_) throw InvalidInput("slab axis out of range");
            if (!(q.lower < q.upper)) throw InvalidInput("slab requires lower < upper");
          } else if constexpr (std::is_same_v<T, OpenBox>) {
            check_dim(q.lower, "box lower");
            check_dim(q.upper, "box upper");
            for (int i = 0; i < dim_; ++i)
              if (!(q.lower[i] < q.upper[i])) throw InvalidInput("box requires lower < upper");
          } else if constexpr (std::is_same_v<T, Polygon>) {
            if (dim_ != 2) throw InvalidInput("polygon primitive is 2-D only");
            if (q.vertices.size() < 3) throw InvalidInput("polygon needs at least 3 vertices");
            for (const auto& v : q.vertices) check_dim(v, "polygon vertex");
            const std::size_t n = q.vertices.size();
            for (std::size_t i = 0; i < n; ++i)
              for (std::size_t j = i + 2; j < n; ++j) {
                if (i == 0 && j == n - 1) continue;
                if (segments_cross(q.vertices[i], q.vertices[(i + 1) % n], q.vertices[j], q.vertices[(j + 1) % n]))
                  throw InvalidInput("polygon is not simple");
              }
          } else {
            check_dim(q.origin, "capsule origin");
            check_dim(q.direction, "capsule direction");
            if (euclid(q.direction) == 0.0) throw InvalidInput("capsule direction is zero");
            if (!(q.radius > 0.0)) throw InvalidInput("capsule radius must be positive");
          }
        },
        prim);
  }
  if (!primitives_.empty() && !(deepest_primitive_point() > 0.0))
    throw InvalidInput("domain is empty: the primitives have no common interior point");
  auto in_closure = [&](const Point& p, const char* what) {
    if (primitive_clearance(p) < -1e-12) throw InvalidInput(std::string(what) + " lies outside the primitive intersection");
  };
  for (const auto& rem : removals_) {
    std::visit(
        [&](const auto& q) {
          using T = std::decay_t<decltype(q)>;
          if constexpr (std::is_same_v<T, RemovedPoint>) {
            check_dim(q.at, "removed point");
            in_closure(q.at, "removed point");
          } else if constexpr (std::is_same_v<T, RemovedSegment>) {
            check_dim(q.a, "removed segment");
            check_dim(q.b, "removed segment");
            in_closure(q.a, "removed segment endpoint");
            in_closure(q.b, "removed segment endpoint");
            if (dim_ == 2 && !primitives_.empty() && primitive_clearance(q.a) <= 1e-12 &&
                primitive_clearance(q.b) <= 1e-12)
              throw InvalidInput("removed segment spans the domain and would disconnect it");
          } else if constexpr (std::is_same_v<T, RemovedRay>) {
            check_dim(q.origin, "removed ray origin");
            check_dim(q.direction, "removed ray direction");
            if (euclid(q.direction) == 0.0) throw InvalidInput("removed ray direction is zero");
            in_closure(q.origin, "removed ray origin");
          } else {
            if (dim_ != 2) throw InvalidInput("axis point family lives on a 2-D section");
            if (q.index < 2) throw InvalidInput("axis point family section index must be >= 2");
            if (std::abs(q.weight_n * q.weight_n + q.weight_next * q.weight_next - 1.0) > 1e-12)
              throw InvalidInput("axis point family weights must form a unit vector");
            if (q.truncation != 0 && q.truncation < q.index + 1)
              throw InvalidInput("axis point family truncation below the section support");
          }
        },
        rem);
  }
}

// Compass search for a point of positive primitive clearance; the clearance is concave on
// intersections of convex pieces, so starting from each primitive's anchor is enough.
double DomainSpec::deepest_primitive_point() const {
  std::vector<Point> seeds{Point(dim_)};
  for (const auto& prim : primitives_)
    std::visit(
        [&](const auto& q) {
          using T = std::decay_t<decltype(q)>;
          if constexpr (std::is_same_v<T, HalfSpace>) {
            seeds.push_back(q.normal * ((q.offset + 1.0) / dot(q.normal, q.normal)));
          } else if constexpr (std::is_same_v<T, OpenBall>) {
            seeds.push_back(q.center);
          } else if constexpr (std::is_same_v<T, Slab>) {
            seeds.push_back(Point::unit(dim_, q.axis) * (0.5 * (q.lower + q.upper)));
          } else if constexpr (std::is_same_v<T, OpenBox>) {
            seeds.push_back((q.lower + q.upper) * 0.5);
          } else if constexpr (std::is_same_v<T, Polygon>) {
            const std::size_t n = q.vertices.size();
            for (std::size_t i = 0; i < n; ++i)
              seeds.push_back((q.vertices[i] + q.vertices[(i + 1) % n] + q.vertices[(i + 2) % n]) / 3.0);
          } else {
            seeds.push_back(q.origin);
          }
        },
        prim);
  double best = -kInf;
  for (Point x : seeds) {
    double c = primitive_clearance(x);
    double step = std::max(1.0, std::abs(c));
    for (int it = 0; it < 4000 && c <= 0.0 && step > 1e-9; ++it) {
      bool moved = false;
      for (int axis = 0; axis < dim_ && !moved; ++axis)
        for (double sign : {1.0, -1.0}) {
          const Point y = x + Point::unit(dim_, axis) * (sign * step);
          const double cy = primitive_clearance(y);
          if (cy > c) {
            x = y, c = cy, moved = true;
            break;
          }
        }
      if (!moved) step *= 0.5;
    }
    best = std::max(best, c);
    if (best > 0.0) break;
  }
  return best;
}

double DomainSpec::primitive_clearance(const Point& x) const {
  double c = kInf;
  const PrimitiveClearance pc{norm_, x};
  for (const auto& p : primitives_) c = std::min(c, std::visit(pc, p));
  return c;
}

double DomainSpec::clearance(const Point& x) const {
  double c = primitive_clearance(x);
  const RemovalDistance rd{norm_, x};
  for (const auto& r : removals_) c = std::min(c, std::visit(rd, r));
  return c;
}

bool DomainSpec::contains(const Point& x) const {
  if (x.dim() != dim_) throw InvalidInput("contains: point dimension " + std::to_string(x.dim()) +
                                          " does not match domain dimension " + std::to_string(dim_));
  if (!x.finite()) throw InvalidInput("contains: non-finite point");
  return clearance(x) > 0.0;
}

double DomainSpec::boundary_distance(const Point& x) const {
  if (!contains(x)) throw DomainViolation("boundary_distance: " + to_string(x) + " is not inside the domain");
  return clearance(x);
}

bool DomainSpec::centrally_symmetric() const { return invariant_under(*this, &negate, 0); }

bool DomainSpec::mirror_symmetric(int axis) const {
  if (axis < 0 || axis >= dim_) throw InvalidInput("mirror_symmetric: axis out of range");
  return invariant_under(*this, &reflect, axis);
}

namespace presets {

DomainSpec half_plane(int dim) {
  return DomainSpec(dim, {}, {HalfSpace{Point::unit(dim, dim - 1), 0.0}}, {}, "half-plane");
}

DomainSpec punctured_plane(int dim) { return DomainSpec(dim, {}, {}, {RemovedPoint{Point(dim)}}, "punctured-plane"); }

DomainSpec strip() { return DomainSpec(2, {}, {Slab{1, -1.0, 1.0}}, {}, "strip"); }

DomainSpec slab3d() { return DomainSpec(3, {}, {Slab{1, -1.0, 1.0}}, {}, "slab3d"); }

DomainSpec unit_ball(int dim, NormSpec norm) { return DomainSpec(dim, norm, {OpenBall{Point(dim), 1.0}}, {}, "unit-ball"); }

DomainSpec box(int dim, double half) {
  Point lo(dim), hi(dim);
  for (int i = 0; i < dim; ++i) lo[i] = -half, hi[i] = half;
  return DomainSpec(dim, {}, {OpenBox{lo, hi}}, {}, "box");
}

DomainSpec polygon_p() {
  Polygon p{{{-4, 1}, {-1, 1}, {-1, 4}, {4, 4}, {4, -4}, {-1, -4}, {-1, -1}, {-4, -1}}};
  return DomainSpec(2, {}, {p}, {}, "polygon-P");
}

DomainSpec omega_n(int n) {
  if (n < 2) throw InvalidInput("omega_n: n must be at least 2");
  if (n == 2) {
    DomainSpec d = punctured_plane(2);
    return DomainSpec(2, {}, d.primitives(), d.removals(), "omega-2");
  }
  const double s3 = std::sqrt(3.0);
  const double right = (n - 2) * s3 + 1.0;
  std::vector<Removal> removals;
  for (int j = 0; j <= n - 2; ++j) removals.push_back(RemovedPoint{Point{j * s3, 0.0}});
  for (int j = 0; j <= n - 3; ++j) {
    const double c = j * s3 + s3 / 2.0;
    removals.push_back(RemovedSegment{Point{c, 0.5}, Point{c, 1.0}});
    removals.push_back(RemovedSegment{Point{c, -1.0}, Point{c, -0.5}});
  }
  return DomainSpec(2, {}, {OpenBox{Point{-1.0, -1.0}, Point{right, 1.0}}}, std::move(removals),
                    "omega-" + std::to_string(n));
}

DomainSpec l2_section(int n, bool diagonal) {
  if (n < 2) throw InvalidInput("l2_section: n must be at least 2");
  AxisPointFamily f;
  f.index = n;
  if (!diagonal) {
    f.weight_n = 1.0;
    f.weight_next = 0.0;
  }
  return DomainSpec(2, {}, {}, {f}, (diagonal ? "l2-section-" : "l2-axis-section-") + std::to_string(n));
}

DomainSpec starlike3d() {
  const Point tip{0.0, 0.0, 0.5};
  const Point up{0.0, 0.0, 1.0};
  return DomainSpec(3, {}, {Capsule{tip, up, 1.0}}, {RemovedRay{tip, up}}, "starlike3d");
}

DomainSpec by_name(const std::string& name, int n) {
  if (name == "half-plane") return half_plane(2);
  if (name == "half-space") return half_plane(3);
  if (name == "punctured-plane") return punctured_plane(2);
  if (name == "strip") return strip();
  if (name == "slab3d") return slab3d();
  if (name == "unit-ball") return unit_ball(2);
  if (name == "box") return box(2);
  if (name == "polygon-P") return polygon_p();
  if (name == "omega-n") return omega_n(n);
  if (name == "l2-section") return l2_section(n);
  if (name == "starlike3d") return starlike3d();
  throw InvalidInput("unknown preset '" + name + "'");
}

std::vector<std::string> names() {
  return {"half-plane", "half-space", "punctured-plane", "strip", "slab3d", "unit-ball",
          "box",        "polygon-P",  "omega-n",         "l2-section", "starlike3d"};
}

}  // namespace presets

}  // namespace qh
