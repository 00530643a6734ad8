#include "qh/ball.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "qh/errors.hpp"
#include "qh/parallel.hpp"
#include "qh/paths.hpp"

namespace qh {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double solve_k(const DomainSpec& domain, const Point& a, const Point& b, const SolverConfig& s,
               const QuadratureConfig& q) {
  return qh_distance(domain, a, b, s, q).qh_length;
}

void require_planar(const DomainSpec& domain, const char* who) {
  if (domain.dimension() != 2) throw InvalidInput(std::string(who) + ": planar domains only");
}

// Stops the bracketing solver once the bracket is relatively small.
struct RelTol {
  double rel;
  bool operator()(double a, double b) const { return std::abs(b - a) <= rel * std::max(std::abs(a), std::abs(b)); }
};

}  // namespace

bool DistanceField::present(int i, int j) const { return !std::isnan(value(i, j)); }

DistanceField distance_field(const DomainSpec& domain, const Point& center, const Point& lower, const Point& upper,
                             double h, const SolverConfig& s, const QuadratureConfig& q, bool parallel) {
  require_planar(domain, "distance_field");
  s.validate();
  q.validate();
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidInput("distance_field: spacing must be positive");
  if (!(upper[0] > lower[0]) || !(upper[1] > lower[1])) throw InvalidInput("distance_field: empty window");
  domain.boundary_distance(center);
  DistanceField f{domain, center, lower, h, 0, 0, {}, s, q};
  f.nx = static_cast<int>(std::floor((upper[0] - lower[0]) / h + 1e-9)) + 1;
  f.ny = static_cast<int>(std::floor((upper[1] - lower[1]) / h + 1e-9)) + 1;
  if (f.nx < 2 || f.ny < 2) throw InvalidInput("distance_field: window narrower than one cell");
  f.values.assign(static_cast<std::size_t>(f.nx) * f.ny, kNaN);
  for_each_index(f.values.size(), parallel, [&](std::size_t id) {
    const Point p = f.node(static_cast<int>(id % f.nx), static_cast<int>(id / f.nx));
    if (!domain.contains(p)) return;
    try {
      f.values[id] = solve_k(domain, center, p, s, q);
    } catch (const NoPathError& e) {
      throw FieldError("distance_field: node " + to_string(p) + " not connected to the center: " + e.what());
    }
  });
  return f;
}

DistanceField distance_field_around(const DomainSpec& domain, const Point& center, double half, double h,
                                    const SolverConfig& s, const QuadratureConfig& q, bool parallel) {
  require_planar(domain, "distance_field_around");
  const Bounds& b = domain.bounds();
  Point lo(2), hi(2);
  for (int i = 0; i < 2; ++i) {
    lo[i] = std::max(center[i] - half, b.lower[i]);
    hi[i] = std::min(center[i] + half, b.upper[i]);
  }
  return distance_field(domain, center, lo, hi, h, s, q, parallel);
}

BallContour ball_contour(const DistanceField& f, double r, bool polish, bool parallel) {
  if (!std::isfinite(r) || !(r > 0.0)) throw InvalidInput("ball_contour: level must be positive");
  const int nx = f.nx, ny = f.ny;
  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  for (double v : f.values)
    if (!std::isnan(v)) vmin = std::min(vmin, v), vmax = std::max(vmax, v);
  if (!(vmin < r && r < vmax)) throw InvalidInput("ball_contour: level outside the sampled range");
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const bool edge = i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
      if (edge && f.present(i, j) && f.value(i, j) < r)
        throw TruncatedContour("ball_contour: the ball reaches the window edge at " + to_string(f.node(i, j)));
    }

  // Edge keys: horizontal edge from node (i,j) -> 2 id, vertical -> 2 id + 1.
  auto hkey = [&](int i, int j) { return 2L * (static_cast<long>(j) * nx + i); };
  auto vkey = [&](int i, int j) { return 2L * (static_cast<long>(j) * nx + i) + 1; };
  auto edge_nodes = [&](long key, Point& p, Point& q, double& vp, double& vq) {
    const long id = key / 2;
    const int i = static_cast<int>(id % nx), j = static_cast<int>(id / nx);
    const int i2 = key % 2 ? i : i + 1, j2 = key % 2 ? j + 1 : j;
    p = f.node(i, j), q = f.node(i2, j2);
    vp = f.value(i, j), vq = f.value(i2, j2);
  };

  std::vector<std::pair<long, long>> segs;  // (start edge, end edge), inside on the left
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      const double v[4] = {f.value(i, j), f.value(i + 1, j), f.value(i + 1, j + 1), f.value(i, j + 1)};
      const bool absent = std::isnan(v[0]) || std::isnan(v[1]) || std::isnan(v[2]) || std::isnan(v[3]);
      if (absent) {
        for (double w : v)
          if (!std::isnan(w) && w < r)
            throw TruncatedContour("ball_contour: the ball reaches an absent node near " + to_string(f.node(i, j)));
        continue;
      }
      const long key[4] = {hkey(i, j), vkey(i + 1, j), hkey(i, j + 1), vkey(i, j)};
      bool in[4];
      for (int k = 0; k < 4; ++k) in[k] = v[k] < r;
      int starts[2], ends[2], ns = 0, ne = 0;
      for (int k = 0; k < 4; ++k) {
        if (in[k] == in[(k + 1) % 4]) continue;
        if (in[k])
          starts[ns++] = k;
        else
          ends[ne++] = k;
      }
      if (ns == 1) {
        segs.emplace_back(key[starts[0]], key[ends[0]]);
      } else if (ns == 2) {
        // Saddle: the cell-centre average decides whether the inside corners connect.
        const bool centre_in = 0.25 * (v[0] + v[1] + v[2] + v[3]) < r;
        for (int a = 0; a < 2; ++a) {
          const int k = starts[a];
          const int e = centre_in ? (k + 1) % 4 : (k + 3) % 4;
          segs.emplace_back(key[k], key[e]);
        }
      }
    }

  std::map<long, std::size_t> by_start;
  std::vector<long> keys;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    by_start[segs[k].first] = k;
    keys.push_back(segs[k].first);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<Point> where(keys.size());
  for_each_index(keys.size(), parallel && polish, [&](std::size_t n) {
    Point p, q;
    double vp, vq;
    edge_nodes(keys[n], p, q, vp, vq);
    double t = (r - vp) / (vq - vp);
    if (polish) {
      auto g = [&](double s) {
        if (s <= 0.0) return vp - r;
        if (s >= 1.0) return vq - r;
        return solve_k(f.domain, f.center, lerp(p, q, s), f.solver, f.quadrature) - r;
      };
      std::uintmax_t iters = 60;
      const auto br = boost::math::tools::toms748_solve(g, 0.0, 1.0, vp - r, vq - r, RelTol{1e-12}, iters);
      t = 0.5 * (br.first + br.second);
    }
    where[n] = lerp(p, q, t);
  });
  auto point_of = [&](long key) {
    return where[static_cast<std::size_t>(std::lower_bound(keys.begin(), keys.end(), key) - keys.begin())];
  };

  BallContour out;
  out.r = r;
  out.h = f.h;
  out.polished = polish;
  std::vector<char> used(segs.size(), 0);
  for (std::size_t s0 = 0; s0 < segs.size(); ++s0) {
    if (used[s0]) continue;
    Polyline loop;
    std::size_t cur = s0;
    while (!used[cur]) {
      used[cur] = 1;
      loop.vertices.push_back(point_of(segs[cur].first));
      const auto it = by_start.find(segs[cur].second);
      if (it == by_start.end()) throw TruncatedContour("ball_contour: open level-set chain");
      cur = it->second;
    }
    if (cur != s0) throw TruncatedContour("ball_contour: level-set chains merge");
    loop.vertices.push_back(loop.vertices.front());
    out.loops.push_back(std::move(loop));
  }
  return out;
}

double max_tangent_gap(const BallContour& c, int window) {
  if (window < 1) throw InvalidInput("max_tangent_gap: window must be positive");
  double gap = 0.0;
  for (const auto& loop : c.loops) {
    const double len = polyline_length(NormSpec{}, loop);
    const int m = std::max(4 * window, static_cast<int>(std::lround(len / c.h)));
    Polyline rs = reparametrize(NormSpec{}, loop, m + 1);
    rs.vertices.pop_back();  // closed: last repeats first
    for (int i = 0; i < m; ++i) {
      const Point& p = rs[i];
      const Point back = p - rs[(i - window + m) % m];
      const Point fwd = rs[(i + window) % m] - p;
      const double cross = back[0] * fwd[1] - back[1] * fwd[0];
      gap = std::max(gap, std::atan2(std::abs(cross), dot(back, fwd)));
    }
  }
  return gap;
}

double directional_radius(const DomainSpec& domain, const Point& center, const Point& dir, double r,
                          const SolverConfig& s, const QuadratureConfig& q, double rel_tol, double hint) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidInput("directional_radius: radius must be positive");
  const double dn = euclid(dir);
  if (!(dn > 0.0)) throw InvalidInput("directional_radius: zero direction");
  const Point u = dir / dn;
  const double d = domain.boundary_distance(center);
  auto at = [&](double rho) { return center + u * rho; };
  auto f = [&](double rho) { return solve_k(domain, center, at(rho), s, q) - r; };

  // k <= -log(1 - rho/d) inside B(center, d) and k >= log(1 + rho/d) everywhere.
  double a = d * (1.0 - std::exp(-r)), fa = f(a);
  while (fa >= 0.0) {
    if (std::abs(fa) <= 1e-13 * r) return a;
    a *= 0.999;
    fa = f(a);
  }
  double b = 0.0, fb = 0.0;
  if (hint > a) {
    const double lo = hint * 0.98, hi = hint * 1.02;
    if (lo > a && domain.contains(at(lo))) {
      const double flo = f(lo);
      if (flo <= 0.0)
        a = lo, fa = flo;
      else
        b = lo, fb = flo;
    }
    if (!(b > 0.0) && domain.contains(at(hi))) {
      const double fhi = f(hi);
      if (fhi > 0.0)
        b = hi, fb = fhi;
      else
        a = hi, fa = fhi;
    }
  }
  if (!(b > 0.0)) {
    // |log d| is 1-Lipschitz for k, so k >= r wherever d <= d(center) e^{-r}: march to the first
    // such point along the ray (steps of d - target never overshoot since d is 1-Lipschitz).
    const double target = d * std::exp(-r);
    double e = d * std::expm1(r), rho = a;
    for (int k = 0; k < 400; ++k) {
      const double gap = domain.clearance(at(rho)) - target;
      if (gap <= 1e-9 * d) break;
      rho += gap;
      if (rho >= e) break;
    }
    e = std::min(e, rho);
    if (e > a && domain.contains(at(e)) && domain.clearance(at(e)) > 0.0 && (fb = f(e)) >= 0.0) {
      b = e;
      if (fb == 0.0) return b;
    } else {
      // Ray exit by bisection on membership, then approach it until k exceeds r.
      double in = a, out = d * std::expm1(r);
      for (int k = 0; k < 200 && out - in > 1e-14 * out; ++k) {
        const double m = 0.5 * (in + out);
        (domain.contains(at(m)) ? in : out) = m;
      }
      for (int k = 1; k <= 60; ++k) {
        const double t = a + (in - a) * (1.0 - std::ldexp(1.0, -k));
        if (t <= a) continue;
        const double ft = f(t);
        if (ft > 0.0) {
          b = t, fb = ft;
          break;
        }
        a = t, fa = ft;
      }
      if (!(b > 0.0)) throw ResolutionError("directional_radius: sphere not bracketed before the boundary");
    }
  }
  if (fb == 0.0) return b;
  std::uintmax_t iters = 100;
  const auto br = boost::math::tools::toms748_solve(f, a, b, fa, fb, RelTol{rel_tol}, iters);
  return 0.5 * (br.first + br.second);
}

SmoothnessReport smoothness_profile(const DomainSpec& domain, const Point& center, double r, int probe_count,
                                    const std::vector<double>& schedule, const SolverConfig& s,
                                    const QuadratureConfig& q, double exponent, bool parallel) {
  require_planar(domain, "smoothness_profile");
  if (!domain.convex()) throw InvalidInput("smoothness_profile: the smoothness theorem needs a convex domain");
  if (probe_count < 1) throw InvalidInput("smoothness_profile: need at least one probe");
  if (schedule.empty()) throw InvalidInput("smoothness_profile: empty step schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0 && schedule[i] < 1.0)) throw InvalidInput("smoothness_profile: steps must lie in (0,1)");
    if (i > 0 && !(schedule[i] < schedule[i - 1]))
      throw InvalidInput("smoothness_profile: schedule must be strictly decreasing");
  }
  const double d0 = domain.boundary_distance(center);

  SmoothnessReport rep;
  rep.center = center;
  rep.r = r;
  rep.exponent = exponent;
  rep.schedule = schedule;
  rep.probes.resize(probe_count);
  std::vector<Point> normal(probe_count);
  for_each_index(probe_count, parallel, [&](std::size_t j) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(j) / probe_count;
    const Point u{std::cos(ang), std::sin(ang)};
    const Point p = center + u * directional_radius(domain, center, u, r, s, q);
    if (euclid(p - center) < 0.1 * d0 || domain.boundary_distance(p) < 0.1 * d0)
      throw ProbeRejected("smoothness_profile: probe " + to_string(p) + " is not separated from center and boundary");
    const GeodesicResult g = qh_distance(domain, center, p, s, q);
    const Point t = g.path.back() - g.path[g.path.size() - 2];
    rep.probes[j] = p;
    normal[j] = t / euclid(t);
  });

  const char* names[4] = {"normal", "tangent", "diagonal+", "diagonal-"};
  const std::size_t ns = schedule.size();
  // Layout: per probe, k(x) then for each direction and step, k(x + hu), k(x - hu).
  const std::size_t per_probe = 1 + 4 * ns * 2;
  std::vector<Point> pts(probe_count * per_probe);
  for (int j = 0; j < probe_count; ++j) {
    const Point& p = rep.probes[j];
    const Point n = normal[j], t{-n[1], n[0]};
    const Point dirs[4] = {n, t, (n + t) / std::sqrt(2.0), (n - t) / std::sqrt(2.0)};
    const double dp = domain.boundary_distance(p);
    std::size_t at = j * per_probe;
    pts[at++] = p;
    for (const auto& u : dirs)
      for (double frac : schedule) {
        pts[at++] = p + u * (frac * dp);
        pts[at++] = p - u * (frac * dp);
      }
  }
  std::vector<double> k(pts.size());
  for_each_index(pts.size(), parallel, [&](std::size_t i) { k[i] = solve_k(domain, center, pts[i], s, q); });
  for (int j = 0; j < probe_count; ++j) {
    const double dp = domain.boundary_distance(rep.probes[j]);
    const std::size_t base = j * per_probe;
    for (int dir = 0; dir < 4; ++dir) {
      SmoothnessRow row{j, names[dir], {}};
      for (std::size_t m = 0; m < ns; ++m) {
        const std::size_t at = base + 1 + (dir * ns + m) * 2;
        const double h = schedule[m] * dp;
        row.ratios.push_back((k[at] + k[at + 1] - 2.0 * k[base]) / std::pow(h, exponent));
      }
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

ConvexityReport convexity_check(const DistanceField& f, double r, int samples, std::uint64_t rng_seed, double tol,
                                bool parallel) {
  ConvexityReport rep;
  if (!f.domain.convex()) {
    rep.applicable = false;
    rep.status = "not-applicable: domain is not convex";
    return rep;
  }
  if (samples < 0) throw InvalidInput("convexity_check: negative sample count");
  std::vector<Point> inside;
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i)
      if (f.present(i, j) && f.value(i, j) <= r) inside.push_back(f.node(i, j));
  if (inside.size() < 2) throw InvalidInput("convexity_check: fewer than two lattice nodes inside the ball");
  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<std::size_t> pick(0, inside.size() - 1);
  std::vector<std::pair<Point, Point>> pairs;
  for (int k = 0; k < samples; ++k) {
    const std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    while (b == a) b = pick(rng);
    pairs.emplace_back(inside[a], inside[b]);
  }
  std::vector<double> km(pairs.size());
  for_each_index(pairs.size(), parallel, [&](std::size_t n) {
    km[n] = solve_k(f.domain, f.center, (pairs[n].first + pairs[n].second) * 0.5, f.solver, f.quadrature);
  });
  rep.pairs = samples;
  for (std::size_t n = 0; n < pairs.size(); ++n)
    if (!(km[n] <= r + tol)) rep.violations.push_back({pairs[n].first, pairs[n].second, km[n]});
  rep.status = rep.violations.empty() ? "pass" : "fail";
  return rep;
}

OrthogonalityReport orthogonality_ratio(const DomainSpec& domain, const Point& x0, const Point& x,
                                        const std::vector<double>& t_schedule, const SolverConfig& s,
                                        const QuadratureConfig& q) {
  require_planar(domain, "orthogonality_ratio");
  if (t_schedule.empty()) throw InvalidInput("orthogonality_ratio: empty schedule");
  for (double t : t_schedule)
    if (!(t > 0.0 && t < 1.0)) throw InvalidInput("orthogonality_ratio: t must lie in (0,1)");
  OrthogonalityReport rep;
  rep.geodesic = qh_distance(domain, x0, x, s, q);
  if (!rep.geodesic.converged) throw DependencyError("orthogonality_ratio: geodesic did not converge");
  rep.r = rep.geodesic.qh_length;
  const Point v = x - x0;
  const double rho_x = euclid(v);
  const double theta_x = std::atan2(v[1], v[0]);
  constexpr double kRadiusTol = 1e-11;
  double min_dist = std::numeric_limits<double>::infinity();
  for (double t : t_schedule) {
    const Point p = point_at_fraction(NormSpec{}, rep.geodesic.path, t);
    const double dist_x = euclid(p - x);
    min_dist = std::min(min_dist, dist_x);
    // The nearest sphere point lies within 2 |p - x| of x.
    const double alpha = std::min(std::numbers::pi / 2.0, 4.0 * dist_x / rho_x);
    auto gap = [&](double th) {
      const Point u{std::cos(th), std::sin(th)};
      const double rho = directional_radius(domain, x0, u, rep.r, s, q, kRadiusTol, rho_x);
      return euclid(x0 + u * rho - p);
    };
    const auto best = boost::math::tools::brent_find_minima(gap, theta_x - alpha, theta_x + alpha, 14);
    rep.t.push_back(t);
    rep.ratio.push_back(best.second / dist_x);
    rep.error_bar.push_back(4.0 * kRadiusTol * rho_x / dist_x);
  }
  if (4.0 * kRadiusTol * rho_x > 0.1 * min_dist)
    throw ResolutionError("orthogonality_ratio: sphere location error exceeds a tenth of the smallest offset");
  return rep;
}

CuspReport cusp_free_check(const DomainSpec& domain, const Point& x, double r, const Point& y,
                           const std::vector<double>& z_fractions, int samples_per_ball, double tol,
                           const SolverConfig& s, const QuadratureConfig& q, bool parallel) {
  const int dim = domain.dimension();
  if (dim != 2 && dim != 3) throw InvalidInput("cusp_free_check: dimensions 2 and 3 only");
  if (samples_per_ball < 1) throw InvalidInput("cusp_free_check: need at least one sample per ball");
  CuspReport rep;
  rep.r = r;
  rep.geodesic = qh_distance(domain, x, y, s, q);
  if (!rep.geodesic.converged) throw DependencyError("cusp_free_check: geodesic did not converge");
  if (std::abs(rep.geodesic.qh_length - r) > tol)
    throw InvalidInput("cusp_free_check: y is not on the sphere of radius r");

  // Unit directions: a circle in the plane, a Fibonacci sphere in space.
  std::vector<Point> dirs;
  for (int k = 0; k < samples_per_ball; ++k) {
    if (dim == 2) {
      const double a = 2.0 * std::numbers::pi * k / samples_per_ball;
      dirs.push_back(Point{std::cos(a), std::sin(a)});
    } else {
      const double zc = 1.0 - (2.0 * k + 1.0) / samples_per_ball;
      const double rad = std::sqrt(std::max(0.0, 1.0 - zc * zc));
      const double a = k * std::numbers::pi * (3.0 - std::sqrt(5.0));
      dirs.push_back(Point{rad * std::cos(a), rad * std::sin(a), zc});
    }
  }
  std::vector<Point> pts;
  std::vector<std::size_t> owner;
  for (double frac : z_fractions) {
    if (!(frac >= 0.0 && frac <= 1.0)) throw InvalidInput("cusp_free_check: fractions must lie in [0,1]");
    CuspBall ball;
    ball.z = point_at_fraction(NormSpec{}, rep.geodesic.path, frac);
    const double dist = norm_eval(domain.norm(), ball.z - y);
    ball.u = dist / domain.boundary_distance(ball.z);
    ball.radius = dist / (1.0 + ball.u);
    if (ball.radius > 0.0) {
      pts.push_back(ball.z);
      owner.push_back(rep.balls.size());
      for (double scale : {1.0, 0.5})
        for (const auto& d : dirs) {
          pts.push_back(ball.z + d * (scale * ball.radius));
          owner.push_back(rep.balls.size());
        }
    }
    rep.balls.push_back(ball);
  }
  std::vector<double> k(pts.size());
  for_each_index(pts.size(), parallel, [&](std::size_t i) { k[i] = solve_k(domain, x, pts[i], s, q); });
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CuspBall& b = rep.balls[owner[i]];
    ++b.samples;
    b.max_k = std::max(b.max_k, k[i]);
  }
  for (auto& b : rep.balls) {
    b.included = b.max_k < r + tol;
    if (!b.included) ++rep.violations;
  }
  return rep;
}

SmoothnessDecay smoothness_decay(const SmoothnessReport& report) {
  SmoothnessDecay out;
  const std::size_t steps = report.schedule.size();
  std::size_t probes = report.probes.size();
  for (const auto& row : report.rows) probes = std::max(probes, static_cast<std::size_t>(row.probe) + 1);
  out.probe_max.assign(probes, std::vector<double>(steps, 0.0));
  for (const auto& row : report.rows)
    for (std::size_t j = 0; j < steps && j < row.ratios.size(); ++j)
      out.probe_max[row.probe][j] = std::max(out.probe_max[row.probe][j], std::abs(row.ratios[j]));
  for (const auto& m : out.probe_max) {
    if (steps == 0) break;
    out.worst_decay = std::max(out.worst_decay, m.back() / m.front());
    for (std::size_t j = 1; j < steps; ++j) out.worst_growth = std::max(out.worst_growth, m[j] / m[j - 1]);
  }
  return out;
}

}  // namespace qh
