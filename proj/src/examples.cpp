#include "qh/examples.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qh/errors.hpp"
#include "qh/parallel.hpp"
#include "qh/paths.hpp"

namespace qh {

namespace {

// A tangential contact of the path with the axis is located to within a vertex spacing by the
// clustered crossings; a parabola through the heights of the three vertices around the lowest
// one puts it between vertices. Transversal crossings and endpoints keep the clustered point.
double contact_abscissa(const Polyline& path, const Point& hit) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double d = euclid(path[i] - hit);
    if (d < best_d) best_d = d, best = i;
  }
  if (best == 0 || best + 1 >= path.size()) return hit[0];
  const Point &p = path[best - 1], &q = path[best], &r = path[best + 1];
  if (p[1] < 0.0 || r[1] < 0.0 || p[0] >= q[0] || q[0] >= r[0]) return hit[0];
  const double d1 = (q[1] - p[1]) / (q[0] - p[0]), d2 = (r[1] - q[1]) / (r[0] - q[0]);
  const double curv = (d2 - d1) / (r[0] - p[0]);
  if (!(curv > 0.0)) return hit[0];
  const double x = 0.5 * (p[0] + q[0]) - d1 / (2.0 * curv);
  return x > p[0] && x < r[0] ? x : hit[0];
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// Part of `path` after its closest approach to `p`, starting at p.
Polyline continuation_after(const Polyline& path, const Point& p) {
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double d = euclid(path[i] - p);
    if (d < bd) bd = d, best = i;
  }
  Polyline out{{p}};
  for (std::size_t i = best + 1; i < path.size(); ++i) out.vertices.push_back(path[i]);
  if (out.size() < 2) out.vertices.push_back(path.back());
  return out;
}

Polyline prefix_before(const Polyline& path, const Point& p) {
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double d = euclid(path[i] - p);
    if (d < bd) bd = d, best = i;
  }
  Polyline out;
  for (std::size_t i = 0; i < best; ++i) out.vertices.push_back(path[i]);
  out.vertices.push_back(p);
  if (out.size() < 2) out.vertices.insert(out.vertices.begin(), path.front());
  return out;
}

std::string pattern_label(unsigned pattern, int bits) {
  std::string s;
  for (int k = 0; k < bits; ++k) s += ((pattern >> k) & 1u) ? '+' : '-';
  return s;
}

}  // namespace

void ExampleVerdict::add(VerdictCheck c) { checks.push_back(std::move(c)); }

void ExampleVerdict::finish() {
  passed = std::all_of(checks.begin(), checks.end(), [](const VerdictCheck& c) { return c.informational || c.passed; });
}

DomainSpec build_omega_n(int n) { return presets::omega_n(n); }

std::pair<Point, Point> omega_endpoints(int n) {
  if (n < 2) throw InvalidInput("omega_endpoints: n must be at least 2");
  if (n == 2) return {Point{-1.0, 0.0}, Point{1.0, 0.0}};
  return {Point{-0.5, 0.0}, Point{(n - 2) * std::sqrt(3.0) + 0.5, 0.0}};
}

SolverConfig omega_solver(int n) {
  if (n < 2 || n > 16) throw InvalidInput("omega_solver: n must be in 2..16");
  SolverConfig s;
  s.vertex_budget = 64 * (n - 1);
  s.seed_count = 1 << (n - 1);
  return s;
}

std::vector<SignGeodesic> sign_geodesics(int n, const SolverConfig& s, const QuadratureConfig& q) {
  const DomainSpec omega = build_omega_n(n);
  const auto [x, y] = omega_endpoints(n);
  const int m = side_obstacle_count(omega, x, y);
  if (m != n - 1) throw SolverError("sign_geodesics: expected " + std::to_string(n - 1) + " obstacles, found " +
                                    std::to_string(m));
  std::vector<SignGeodesic> out(std::size_t{1} << m);
  for_each_index(out.size(), true, [&](std::size_t p) {
    const unsigned pattern = static_cast<unsigned>(p);
    const GridInit seed = grid_init(omega, x, y, s, GridOptions{side_barriers(omega, x, y, pattern), {}, 0.0, 4.0});
    out[p] = {pattern, refine_path(omega, seed.path, s, q)};
  });
  return out;
}

ExampleVerdict sign_geodesics_verdict(int n, const std::vector<SignGeodesic>& found, double spread_tol) {
  ExampleVerdict v;
  v.id = "omega-" + std::to_string(n) + "-enumerate";
  v.claim = "There are 2^{n-1} of such geodesics";
  const int expected = 1 << (n - 1);
  int converged = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::vector<Polyline> paths;
  for (const auto& g : found) {
    if (g.geodesic.converged) ++converged;
    lo = std::min(lo, g.geodesic.qh_length);
    hi = std::max(hi, g.geodesic.qh_length);
    paths.push_back(g.geodesic.path);
    v.measured.push_back({"length " + pattern_label(g.pattern, n - 1), g.geodesic.qh_length});
    v.paths.push_back({"pattern " + pattern_label(g.pattern, n - 1), g.geodesic.path});
  }
  const double diam = paths.empty() ? 0.0 : bbox_diameter(paths);
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < paths.size(); ++i)
    for (std::size_t j = i + 1; j < paths.size(); ++j)
      closest = std::min(closest, sup_distance(NormSpec{}, paths[i], paths[j]));
  // Distinct geodesics are counted by single linkage at 1% of the diameter.
  int distinct = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    bool dup = false;
    for (std::size_t j = 0; j < i && !dup; ++j) dup = sup_distance(NormSpec{}, paths[i], paths[j]) < 1e-2 * diam;
    if (!dup) ++distinct;
  }
  v.measured.push_back({"geodesics", static_cast<double>(found.size())});
  v.measured.push_back({"distinct", static_cast<double>(distinct)});
  v.measured.push_back({"length spread", hi - lo});
  v.measured.push_back({"closest pair sup-distance", closest});
  v.add({"all converged", converged == static_cast<int>(found.size()), static_cast<double>(converged),
         static_cast<double>(found.size()), "", false});
  v.add({"distinct count", distinct == expected, static_cast<double>(distinct), static_cast<double>(expected),
         "single linkage at 1% of the bounding-box diameter", false});
  v.add({"length spread", hi - lo < spread_tol, hi - lo, spread_tol, "max - min over patterns", false});
  v.finish();
  return v;
}

ExampleVerdict enumerate_sign_geodesics(int n, const SolverConfig& s, const QuadratureConfig& q, double spread_tol) {
  return sign_geodesics_verdict(n, sign_geodesics(n, s, q), spread_tol);
}

std::vector<double> expected_intersections(int n) {
  const auto [x, y] = omega_endpoints(n);
  std::vector<double> out{x[0]};
  for (int k = 0; k <= n - 3; ++k) out.push_back((2 * k + 1) * std::sqrt(3.0) / 2.0);
  out.push_back(y[0]);
  return out;
}

ExampleVerdict intersection_verdict(int n, const GeodesicResult& upper, const GeodesicResult* lower,
                                    double abscissa_tol, double mirror_tol) {
  if (!upper.converged || (lower && !lower->converged))
    throw DependencyError("intersection_verdict: geodesics must be converged");
  ExampleVerdict v;
  v.id = "omega-" + std::to_string(n) + "-count";
  v.claim = "# (gamma_1 cap gamma_2) = n";
  const Polyline reflected = mirrored(upper.path, 1);
  const auto hits = clustered_intersections(upper.path, reflected, 1e-3);
  const auto want = expected_intersections(n);
  v.measured.push_back({"intersections", static_cast<double>(hits.size())});
  double worst = 0.0, off_axis = 0.0;
  const bool same_count = hits.size() == want.size();
  std::vector<double> abscissa;
  for (const auto& h : hits) abscissa.push_back(contact_abscissa(upper.path, h));
  if (same_count)
    for (std::size_t k = 0; k < hits.size(); ++k) {
      worst = std::max(worst, std::abs(abscissa[k] - want[k]));
      off_axis = std::max(off_axis, std::abs(hits[k][1]));
    }
  for (std::size_t k = 0; k < hits.size(); ++k) v.measured.push_back({"abscissa " + std::to_string(k), abscissa[k]});
  v.measured.push_back({"length upper", upper.qh_length});
  v.add({"intersection count", same_count, static_cast<double>(hits.size()), static_cast<double>(n),
         "clustering radius 1e-3", false});
  v.add({"abscissae", same_count && worst < abscissa_tol && off_axis < abscissa_tol, std::max(worst, off_axis),
         abscissa_tol, "endpoints and slit columns (2k+1) sqrt3/2", false});
  v.paths = {{"upper", upper.path}, {"reflection", reflected}};
  if (lower) {
    const double mirror = sup_distance(NormSpec{}, reflected, lower->path);
    v.measured.push_back({"length lower", lower->qh_length});
    v.measured.push_back({"lower vs reflection sup-distance", mirror});
    v.add({"independent lower geodesic is the reflection", mirror < mirror_tol, mirror, mirror_tol,
           "separately refined all-below geodesic", false});
    v.paths.push_back({"lower", lower->path});
  }
  v.finish();
  return v;
}

ExampleVerdict verify_intersection_count(int n, const SolverConfig& s, const QuadratureConfig& q) {
  if (n < 3) throw InvalidInput("verify_intersection_count: n must be at least 3");
  const DomainSpec omega = build_omega_n(n);
  const auto [x, y] = omega_endpoints(n);
  const unsigned above = (1u << (n - 1)) - 1u;
  const GridInit seed = grid_init(omega, x, y, s, GridOptions{side_barriers(omega, x, y, above), {}, 0.0, 4.0});
  const Polyline seeds[2] = {seed.path, mirrored(seed.path, 1)};
  GeodesicResult g[2];
  for_each_index(2, true, [&](std::size_t k) { g[k] = refine_path(omega, seeds[k], s, q); });
  return intersection_verdict(n, g[0], &g[1]);
}

ExampleVerdict polygon_prolongation_check(double t, const SolverConfig& s, const QuadratureConfig& q) {
  if (!(t > 0.0 && t <= 1.0)) throw InvalidInput("polygon_prolongation_check: t must lie in (0, 1]");
  const DomainSpec poly = presets::polygon_p();
  const Point x{-t - 1.0, 0.0}, y{-1.0, 0.0};
  const Point z[2] = {Point{0.0, 1.0}, Point{0.0, -1.0}};
  ExampleVerdict v;
  v.id = "polygon-" + fmt(t);
  v.claim = "k_P(x,y) = t and the geodesic x -> y cannot be uniquely prolonged";
  GeodesicResult g[3];
  for_each_index(3, true, [&](std::size_t k) { g[k] = qh_distance(poly, x, k == 0 ? y : z[k - 1], s, q); });
  for (const auto& r : g)
    if (!r.converged) throw DependencyError("polygon_prolongation_check: a geodesic did not converge");
  const Polyline chord{{x, y}};
  double deviation = 0.0;
  for (const auto& p : g[0].path.vertices) deviation = std::max(deviation, distance_to_polyline(NormSpec{}, p, chord));
  v.measured.push_back({"k(x,y)", g[0].qh_length});
  v.measured.push_back({"segment deviation", deviation});
  v.add({"k(x,y) = t", std::abs(g[0].qh_length - t) < 1e-4, std::abs(g[0].qh_length - t), 1e-4, "", false});
  v.add({"geodesic is the segment", deviation < 1e-3, deviation, 1e-3, "", false});
  Polyline after[2];
  for (int k = 0; k < 2; ++k) {
    const std::string tag = k == 0 ? "z1" : "z2";
    const double miss = distance_to_polyline(NormSpec{}, y, g[k + 1].path);
    const Polyline before = prefix_before(g[k + 1].path, y);
    double off = 0.0;
    for (const auto& p : before.vertices) off = std::max(off, distance_to_polyline(NormSpec{}, p, chord));
    after[k] = continuation_after(g[k + 1].path, y);
    v.measured.push_back({"k(x," + tag + ")", g[k + 1].qh_length});
    v.measured.push_back({"distance to y, x->" + tag, miss});
    v.add({"x->" + tag + " passes through y", miss < 1e-3, miss, 1e-3, "", false});
    v.add({"x->" + tag + " contains [x,y]", off < 1e-3, off, 1e-3, "sup deviation of the part before y", false});
  }
  const double split = sup_distance(NormSpec{}, after[0], after[1]);
  v.measured.push_back({"continuation sup-distance", split});
  v.add({"continuations diverge", split > 0.5, split, 0.5, "", false});
  v.paths = {{"x->y", g[0].path}, {"x->z1", g[1].path}, {"x->z2", g[2].path}};
  v.finish();
  return v;
}

double l2_halfcircle_length(int n, bool diagonal, const QuadratureConfig& q) {
  const DomainSpec section = presets::l2_section(n, diagonal);
  return integrate_curve(
      section, [](double th) { return Point{-std::cos(th), std::sin(th)}; },
      [](double th) { return Point{std::sin(th), std::cos(th)}; }, 0.0, std::numbers::pi, q);
}

ExampleVerdict l2_nongeodesic_lengths(int n_max, double factor, const QuadratureConfig& q) {
  if (n_max < 3) throw InvalidInput("l2_nongeodesic_lengths: n_max must be at least 3");
  ExampleVerdict v;
  v.id = "l2-lengths";
  v.claim = "l_k(gamma_n) > l_k(gamma_{n+1}) > pi and l_k(gamma_n) -> pi";
  std::vector<double> len(n_max + 1, 0.0);
  for_each_index(static_cast<std::size_t>(n_max - 1), true,
                 [&](std::size_t i) { len[i + 2] = l2_halfcircle_length(static_cast<int>(i) + 2, true, q); });
  const double pi = std::numbers::pi;
  bool decreasing = true, above = true;
  double worst_step = std::numeric_limits<double>::infinity(), worst_ratio = 0.0;
  for (int n = 2; n <= n_max; ++n) {
    v.measured.push_back({"length n=" + std::to_string(n), len[n]});
    above = above && len[n] > pi;
    if (n > 2) {
      decreasing = decreasing && len[n] < len[n - 1];
      worst_step = std::min(worst_step, len[n - 1] - len[n]);
    }
    if (n > 4) worst_ratio = std::max(worst_ratio, (len[n] - pi) / (len[n - 1] - pi));
  }
  const double shrink = (len[3] - pi) / (len[n_max] - pi);
  v.measured.push_back({"gap ratio n=3 / n=" + std::to_string(n_max), shrink});
  v.add({"strictly decreasing", decreasing, worst_step, 0.0, "smallest step l(n-1) - l(n)", false});
  v.add({"above pi", above, len[n_max] - pi, 0.0, "smallest gap to pi", false});
  v.add({"gap shrinks", shrink >= factor, shrink, factor, "(l(3) - pi) / (l(n_max) - pi)", false});
  if (n_max > 4)
    v.add({"per-step 30% shrink beyond n=4", worst_ratio <= 0.7, worst_ratio, 0.7,
           "largest gap ratio (l(n) - pi) / (l(n-1) - pi) for n >= 5; not implied by the construction", true});
  Polyline curve;
  for (int k = 0; k <= 128; ++k) {
    const double th = pi * k / 128;
    curve.vertices.push_back(Point{-std::cos(th), std::sin(th)});
  }
  v.paths = {{"half circle (section coordinates)", curve}};
  v.finish();
  return v;
}

ExampleVerdict starlike3d_nonuniqueness(const SolverConfig& s, const QuadratureConfig& q, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.25)) throw InvalidInput("starlike3d_nonuniqueness: grid_step in (0, 0.25]");
  const DomainSpec omega = presets::starlike3d();
  const Point x{0.5, 0.0, 1.0}, y{-0.5, 0.0, 1.0};
  ExampleVerdict v;
  v.id = "starlike3d";
  v.claim = "geodesics from e1/2 + e3 to -e1/2 + e3 are not unique; 1/d has no local maxima";
  if (side_obstacle_count(omega, x, y) != 1) throw SolverError("starlike3d_nonuniqueness: deleted axis not detected");
  GeodesicResult g[2];
  for_each_index(2, true, [&](std::size_t k) {
    const GridInit seed =
        grid_init(omega, x, y, s, GridOptions{side_barriers(omega, x, y, static_cast<unsigned>(k)), {}, 0.0, 4.0});
    g[k] = refine_path(omega, seed.path, s, q);
  });
  for (const auto& r : g)
    if (!r.converged) throw DependencyError("starlike3d_nonuniqueness: a geodesic did not converge");
  const double rel = std::abs(g[0].qh_length - g[1].qh_length) / std::min(g[0].qh_length, g[1].qh_length);
  const double split = sup_distance(NormSpec{}, g[0].path, g[1].path);
  const double mirror = sup_distance(NormSpec{}, mirrored(g[0].path, 1), g[1].path);
  v.measured.push_back({"length side 0", g[0].qh_length});
  v.measured.push_back({"length side 1", g[1].qh_length});
  v.measured.push_back({"separation", split});
  v.measured.push_back({"mirror sup-distance", mirror});
  v.add({"equal lengths", rel < s.equal_length_rel_tol, rel, s.equal_length_rel_tol, "relative", false});
  v.add({"distinct geodesics", split > 0.5, split, 0.5, "sup-distance", false});
  v.add({"mirror symmetry", mirror < 1e-3, mirror, 1e-3, "reflection x2 -> -x2 exchanges the two", false});

  // Lattice over the ball part and a stretch of the cylinder.
  const int nxy = static_cast<int>(std::lround(2.0 / grid_step)) + 1;
  const int nz = static_cast<int>(std::lround(3.0 / grid_step)) + 1;
  auto node = [&](int i, int j, int k) {
    return Point{-1.0 + i * grid_step, -1.0 + j * grid_step, -0.5 + k * grid_step};
  };
  const std::size_t total = static_cast<std::size_t>(nxy) * nxy * nz;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> inv(total, nan);
  auto at = [&](int i, int j, int k) { return (static_cast<std::size_t>(k) * nxy + j) * nxy + i; };
  for_each_index(total, true, [&](std::size_t idx) {
    const int i = static_cast<int>(idx % nxy), j = static_cast<int>((idx / nxy) % nxy), k = static_cast<int>(idx / (nxy * nxy));
    const Point p = node(i, j, k);
    if (omega.contains(p)) inv[idx] = 1.0 / omega.boundary_distance(p);
  });
  double min_inv = std::numeric_limits<double>::infinity();
  int interior = 0, strict_max = 0;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < nxy; ++j)
      for (int i = 0; i < nxy; ++i) {
        const double f = inv[at(i, j, k)];
        if (std::isnan(f)) continue;
        min_inv = std::min(min_inv, f);
        if (i == 0 || j == 0 || k == 0 || i == nxy - 1 || j == nxy - 1 || k == nz - 1) continue;
        bool complete = true, rises = false;
        for (int dk = -1; dk <= 1; ++dk)
          for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di) {
              if (!di && !dj && !dk) continue;
              const double g2 = inv[at(i + di, j + dj, k + dk)];
              if (std::isnan(g2))
                complete = false;
              else if (g2 >= f - 1e-12)
                rises = true;
            }
        if (!complete) continue;
        ++interior;
        if (!rises) ++strict_max;
      }
  v.measured.push_back({"lattice interior nodes", static_cast<double>(interior)});
  v.measured.push_back({"strict local maxima of 1/d", static_cast<double>(strict_max)});
  v.measured.push_back({"max d", 1.0 / min_inv});
  v.add({"no local maxima of 1/d", strict_max == 0, static_cast<double>(strict_max), 0.0,
         "lattice nodes whose 26 neighbours all have smaller 1/d", false});
  v.add({"max d = 1/2", std::abs(1.0 / min_inv - 0.5) < 1e-9, 1.0 / min_inv, 0.5,
         "sampled; equivalently min of 1/d is 2", false});
  v.paths = {{"side 0", g[0].path}, {"side 1", g[1].path}};
  v.finish();
  return v;
}

std::vector<std::string> example_ids() {
  return {"omega-3-count",     "omega-4-count", "omega-5-count", "omega-3-enumerate", "omega-4-enumerate",
          "omega-5-enumerate", "polygon-0.25",  "polygon-0.5",   "polygon-1",         "l2-lengths",
          "starlike3d"};
}

ExampleVerdict run_example(const std::string& id) {
  auto omega_n_of = [&](const std::string& rest) {
    std::size_t used = 0;
    const int n = std::stoi(rest, &used);
    if (n < 3 || n > 8) throw InvalidInput("example: omega n must be in 3..8");
    return std::pair{n, rest.substr(used)};
  };
  try {
    if (id.rfind("omega-", 0) == 0) {
      const auto [n, tail] = omega_n_of(id.substr(6));
      if (tail == "-count") return verify_intersection_count(n, omega_solver(n));
      if (tail == "-enumerate") return enumerate_sign_geodesics(n, omega_solver(n));
    } else if (id.rfind("polygon-", 0) == 0) {
      std::size_t used = 0;
      const double t = std::stod(id.substr(8), &used);
      if (used == id.size() - 8) return polygon_prolongation_check(t);
    } else if (id == "l2-lengths") {
      QuadratureConfig q;
      q.abs_tol = 1e-10;
      q.rel_tol = 1e-12;
      return l2_nongeodesic_lengths(12, 3.0, q);
    } else if (id == "starlike3d") {
      return starlike3d_nonuniqueness();
    }
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  }
  throw InvalidInput("unknown example '" + id + "'");
}

}  // namespace qh
