#include "qh/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "qh/errors.hpp"
#include "qh/parallel.hpp"
#include "qh/paths.hpp"

#include <boost/math/tools/toms748_solve.hpp>

namespace qh {

namespace {

std::vector<double> key(const Point& p) { return {p.coords().begin(), p.coords().end()}; }

Point planar(double theta) { return Point{std::cos(theta), std::sin(theta)}; }

void require_planar_norm(const InducedNorm& norm, const char* who) {
  if (norm.domain().dimension() != 2) throw InvalidInput(std::string(who) + ": planar norms only");
}

}  // namespace

InducedNorm::InducedNorm(DomainSpec domain, double r, const SolverConfig& s, const QuadratureConfig& q,
                         const InducedNormOptions& opt)
    : domain_(std::move(domain)), r_(r), solver_(s), quadrature_(q), opt_(opt) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidInput("induced norm: ball radius must be positive and finite");
  if (!(opt.root_tol > 0.0) || !(opt.eval_tol > 0.0)) throw InvalidInput("induced norm: tolerances must be positive");
  s.validate();
  q.validate();
  const Point origin(domain_.dimension());
  if (!domain_.contains(origin)) throw ConfigurationError("induced norm: the origin must lie in the domain");
  if (!domain_.centrally_symmetric())
    throw ConfigurationError("induced norm: the domain must be symmetric about the origin");
  if (!domain_.convex()) throw ConfigurationError("induced norm: the domain must be convex");

  convexity_.applicable = false;
  convexity_.status = "not-run";
  if (!opt.verify_convexity) return;
  if (domain_.dimension() != 2) {
    convexity_.status = "not-applicable: lattice check is planar";
    return;
  }
  if (opt.convexity_directions < 4) throw InvalidInput("induced norm: convexity check needs at least 4 directions");
  // Boundary points are the extreme points of a star-shaped ball, so midpoints of pairs of them
  // are where a failure of convexity shows first.
  const int nd = opt.convexity_directions;
  std::vector<Point> dirs;
  for (int k = 0; k < nd; ++k) dirs.push_back(planar(2.0 * std::numbers::pi * k / nd));
  const auto rho = radii(dirs);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < nd; ++i)
    for (int j = i + 1; j < nd; ++j)
      if (2 * (j - i) != nd) pairs.push_back({i, j});
  std::mt19937_64 rng(opt.rng_seed);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  if (static_cast<int>(pairs.size()) > opt.convexity_samples) pairs.resize(std::max(opt.convexity_samples, 0));
  std::vector<double> kmid(pairs.size());
  for_each_index(pairs.size(), opt.parallel, [&](std::size_t n) {
    const auto [i, j] = pairs[n];
    const Point mid = (dirs[i] * rho[i] + dirs[j] * rho[j]) * 0.5;
    kmid[n] = qh_distance(domain_, origin, mid, s, q).qh_length;
  });
  convexity_.applicable = true;
  convexity_.status = "boundary-pair midpoints";
  convexity_.pairs = static_cast<int>(pairs.size());
  for (std::size_t n = 0; n < pairs.size(); ++n)
    if (kmid[n] > r + opt.convexity_tol)
      convexity_.violations.push_back({dirs[pairs[n].first] * rho[pairs[n].first],
                                       dirs[pairs[n].second] * rho[pairs[n].second], kmid[n]});
  if (!convexity_.violations.empty())
    throw ConfigurationError("induced norm: B_k(0, " + std::to_string(r) + ") failed the convexity check (" +
                             std::to_string(convexity_.violations.size()) + " of " +
                             std::to_string(convexity_.pairs) + " midpoints outside); M would not be a norm");
}

Point InducedNorm::canonical(const Point& dir) const {
  const double n = euclid(dir);
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidInput("induced norm: direction must be nonzero and finite");
  Point u = dir / n;
  // Snap to a 2^-40 grid so that mirrored images of one direction (which differ in the last
  // bits after trigonometry) share a cache entry; the radius is solved for the snapped direction.
  for (int k = 0; k < u.dim(); ++k) {
    u[k] = std::ldexp(std::nearbyint(std::ldexp(u[k], 40)), -40);
    if (u[k] == 0.0) u[k] = 0.0;  // drop signed zeros from the key
  }
  bool all_mirrored = true;
  for (int k = 0; k < u.dim(); ++k) {
    if (domain_.mirror_symmetric(k))
      u[k] = std::abs(u[k]);
    else
      all_mirrored = false;
  }
  if (!all_mirrored) {
    // Central symmetry: pick the representative whose first nonzero coordinate is positive.
    for (int k = 0; k < u.dim(); ++k) {
      if (u[k] == 0.0) continue;
      if (u[k] < 0.0) u = -u;
      break;
    }
  }
  return u;
}

std::vector<double> InducedNorm::radii(const std::vector<Point>& directions) const {
  std::vector<Point> keys;
  keys.reserve(directions.size());
  for (const auto& d : directions) keys.push_back(canonical(d));
  std::vector<Point> missing;
  {
    std::lock_guard<std::mutex> lock(*mutex_);
    std::set<std::vector<double>> seen;
    for (const auto& k : keys)
      if (!cache_.count(key(k)) && seen.insert(key(k)).second) missing.push_back(k);
  }
  std::vector<double> found(missing.size());
  const Point origin(domain_.dimension());
  for_each_index(missing.size(), opt_.parallel, [&](std::size_t i) {
    found[i] = directional_radius(domain_, origin, missing[i], r_, solver_, quadrature_, opt_.root_tol);
  });
  std::vector<double> out;
  out.reserve(keys.size());
  std::lock_guard<std::mutex> lock(*mutex_);
  for (std::size_t i = 0; i < missing.size(); ++i) cache_.emplace(key(missing[i]), found[i]);
  for (const auto& k : keys) out.push_back(cache_.at(key(k)));
  return out;
}

double InducedNorm::radius(const Point& u) const { return radii({u}).front(); }

double InducedNorm::operator()(const Point& x) const {
  if (x.dim() != domain_.dimension()) throw InvalidInput("induced norm: dimension mismatch");
  if (!x.finite()) throw InvalidInput("induced norm: non-finite point");
  const double n = euclid(x);
  if (n == 0.0) return 0.0;
  return n / radius(x);
}

std::size_t InducedNorm::cache_size() const {
  std::lock_guard<std::mutex> lock(*mutex_);
  return cache_.size();
}

double minkowski_eval(const InducedNorm& norm, const Point& x) { return norm(x); }

TriangleReport triangle_check(const InducedNorm& norm, int samples, std::uint64_t rng_seed, int grid_directions) {
  if (samples < 0) throw InvalidInput("triangle_check: negative sample count");
  if (grid_directions != 0 && grid_directions < 8)
    throw InvalidInput("triangle_check: grid_directions must be 0 or at least 8");
  TriangleReport rep;
  rep.pairs = samples;
  rep.tolerance = 3.0 * norm.eval_tol();
  if (samples > 0) rep.max_excess = -std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto record = [&](const Point& x, const Point& y, double mx, double my, double mxy) {
    const double excess = mxy - mx - my;
    rep.max_excess = std::max(rep.max_excess, excess);
    if (excess > rep.tolerance * (mx + my)) rep.violations.push_back({x, y, excess});
  };

  if (grid_directions == 0) {
    const int dim = norm.domain().dimension();
    std::normal_distribution<double> gauss;
    std::vector<Point> xs, ys;
    for (int k = 0; k < samples; ++k) {
      Point x(dim), y(dim);
      for (int i = 0; i < dim; ++i) x[i] = gauss(rng), y[i] = gauss(rng);
      xs.push_back(x * (0.2 + 1.8 * unit(rng)));
      ys.push_back(y * (0.2 + 1.8 * unit(rng)));
    }
    std::vector<Point> dirs;
    for (int k = 0; k < samples; ++k) {
      dirs.push_back(xs[k]);
      dirs.push_back(ys[k]);
      dirs.push_back(xs[k] + ys[k]);
    }
    const auto rho = norm.radii(dirs);
    for (int k = 0; k < samples; ++k)
      record(xs[k], ys[k], euclid(xs[k]) / rho[3 * k], euclid(ys[k]) / rho[3 * k + 1],
             euclid(xs[k] + ys[k]) / rho[3 * k + 2]);
    return rep;
  }

  require_planar_norm(norm, "triangle_check");
  const int g = grid_directions;
  std::vector<Point> dirs;
  for (int k = 0; k < g; ++k) dirs.push_back(planar(2.0 * std::numbers::pi * k / g));
  const auto rho = norm.radii(dirs);
  std::uniform_int_distribution<int> pick(0, g - 1);
  for (int n = 0; n < samples; ++n) {
    // x along direction i, y along j (at most a half-turn apart), x + y along k between them.
    int i = pick(rng), j = pick(rng);
    int sep = ((j - i) % g + g) % g;
    while (sep < 2 || sep >= g / 2) {
      j = pick(rng);
      sep = ((j - i) % g + g) % g;
    }
    const int k = (i + 1 + static_cast<int>(unit(rng) * (sep - 1))) % g;
    const Point& ui = dirs[i];
    const Point& uj = dirs[j];
    const Point& wk = dirs[k];
    const double c = 0.2 + 1.8 * unit(rng);
    // Solve a ui + b uj = c wk by Cramer's rule; a, b > 0 since wk lies strictly inside the cone.
    const double det = ui[0] * uj[1] - ui[1] * uj[0];
    const double a = c * (wk[0] * uj[1] - wk[1] * uj[0]) / det;
    const double b = c * (ui[0] * wk[1] - ui[1] * wk[0]) / det;
    // M(x + y) = c M(wk) exactly; recomputing x + y would perturb the cached direction.
    record(ui * a, uj * b, a / rho[i], b / rho[j], c / rho[k]);
  }
  return rep;
}

double ray_exit(const DomainSpec& domain, const Point& center, const Point& dir) {
  const double n = euclid(dir);
  if (!(n > 0.0)) throw InvalidInput("ray_exit: zero direction");
  const Point u = dir / n;
  if (!domain.contains(center)) throw DomainViolation("ray_exit: center outside the domain");
  double lo = 0.0, hi = std::max(domain.boundary_distance(center), 1e-12);
  for (int k = 0; domain.contains(center + u * hi); ++k) {
    if (k > 200) throw ConfigurationError("ray_exit: the ray does not leave the domain");
    lo = hi;
    hi *= 2.0;
  }
  for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
    const double m = 0.5 * (lo + hi);
    (domain.contains(center + u * m) ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

HausdorffReport hausdorff_convergence(const DomainSpec& domain, const std::vector<double>& radii, int directions,
                                      const SolverConfig& s, const QuadratureConfig& q,
                                      const InducedNormOptions& opt) {
  if (domain.dimension() != 2) throw InvalidInput("hausdorff_convergence: planar domains only");
  if (!domain.bounded()) throw ConfigurationError("hausdorff_convergence: the domain must be the bounded unit ball of a norm");
  if (directions < 8) throw InvalidInput("hausdorff_convergence: need at least 8 directions");
  if (radii.empty()) throw InvalidInput("hausdorff_convergence: empty radius list");
  HausdorffReport rep;
  rep.directions = directions;
  std::vector<Point> dirs;
  for (int k = 0; k < directions; ++k) dirs.push_back(planar(2.0 * std::numbers::pi * k / directions));
  const Point origin(2);
  Polyline sphere;
  std::vector<double> exit(directions);
  for (int k = 0; k < directions; ++k) {
    exit[k] = ray_exit(domain, origin, dirs[k]);
    sphere.vertices.push_back(dirs[k] * exit[k]);
  }
  sphere.vertices.push_back(sphere.vertices.front());
  for (double r : radii) {
    const InducedNorm norm(domain, r, s, q, opt);
    const auto rho = norm.radii(dirs);
    double scale = 0.0;
    for (int k = 0; k < directions; ++k) scale = std::max(scale, rho[k] / exit[k]);
    Polyline contour;
    for (int k = 0; k < directions; ++k) contour.vertices.push_back(dirs[k] * (rho[k] / scale));
    contour.vertices.push_back(contour.vertices.front());
    double dh = 0.0;
    for (int k = 0; k < directions; ++k) {
      dh = std::max(dh, distance_to_polyline(domain.norm(), contour[k], sphere));
      dh = std::max(dh, distance_to_polyline(domain.norm(), sphere[k], contour));
    }
    rep.steps.push_back({r, scale, dh});
  }
  rep.strictly_decreasing = true;
  for (std::size_t i = 1; i < rep.steps.size(); ++i)
    if (!(rep.steps[i].distance < rep.steps[i - 1].distance)) rep.strictly_decreasing = false;
  return rep;
}

ModulusEstimate modulus_estimate(const InducedNorm& norm, ModulusKind kind, const std::vector<double>& tau,
                                 int budget, std::uint64_t rng_seed) {
  require_planar_norm(norm, "modulus_estimate");
  if (budget <= 0) throw InvalidInput("modulus_estimate: sample budget must be positive");
  if (tau.empty()) throw InvalidInput("modulus_estimate: empty tau grid");
  for (double t : tau)
    if (!(t > 0.0 && t <= (kind == ModulusKind::Convexity ? 2.0 : 1.0)))
      throw InvalidInput("modulus_estimate: tau outside the admissible range");
  ModulusEstimate est;
  est.kind = kind;
  est.tau = tau;
  est.budget = budget;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  est.value.assign(tau.size(), nan);
  est.samples.assign(tau.size(), 0);

  const double pi = std::numbers::pi;
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);

  if (kind == ModulusKind::Convexity) {
    est.note = "sampled infimum over unit-sphere pairs: an upper bound of the true modulus of convexity";
    // For each base point x (axis/diagonal angles first, then random), the partner y on the sphere
    // with M(x - y) = tau exactly is found by a root solve in the angle between them.
    std::vector<double> base;
    for (int i = 0; i < 4 && static_cast<int>(base.size()) < budget; ++i) base.push_back(i * pi / 4);
    while (static_cast<int>(base.size()) < budget) base.push_back(angle(rng));
    const std::size_t nt = tau.size();
    std::vector<double> value(base.size() * nt);
    for_each_index(value.size(), norm.parallel(), [&](std::size_t task) {
      const double theta = base[task / nt], t = tau[task % nt];
      const Point x = planar(theta) * norm.radius(planar(theta));
      auto sphere = [&](double phi) {
        const Point u = planar(theta + phi);
        return Point(u * norm.radius(u));
      };
      auto g = [&](double phi) {
        const Point diff = x - sphere(phi);
        return (euclid(diff) > 0.0 ? norm(diff) : 0.0) - t;
      };
      double phi = pi;
      const double gb = g(pi);
      if (gb > 0.0) {
        std::uintmax_t iters = 100;
        const auto br = boost::math::tools::toms748_solve(
            g, 0.0, pi, -t, gb, [](double lo, double hi) { return hi - lo <= 1e-12; }, iters);
        phi = 0.5 * (br.first + br.second);
      }
      const Point y = sphere(phi);
      value[task] = 1.0 - 0.5 * norm(x + y);
    });
    for (std::size_t task = 0; task < value.size(); ++task) {
      const std::size_t k = task % nt;
      est.value[k] = est.samples[k] == 0 ? value[task] : std::min(est.value[k], value[task]);
      ++est.samples[k];
    }
    return est;
  }

  // Structured pairs of axis/diagonal directions first, then uniformly random angles.
  std::vector<std::pair<double, double>> pairs;
  for (int i = 0; i < 8 && static_cast<int>(pairs.size()) < budget; ++i)
    for (int j = i + 1; j < 8 && static_cast<int>(pairs.size()) < budget; ++j) pairs.push_back({i * pi / 4, j * pi / 4});
  while (static_cast<int>(pairs.size()) < budget) pairs.push_back({angle(rng), angle(rng)});

  std::vector<Point> first;
  for (const auto& [a, b] : pairs) {
    first.push_back(planar(a));
    first.push_back(planar(b));
  }
  const auto rho = norm.radii(first);

  est.note = "sampled supremum with M(y +- h) >= 1 imposed: a lower bound of the restricted modulus of smoothness";
  std::vector<Point> second;
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    const Point y = first[2 * n] * rho[2 * n];
    const Point hdir = first[2 * n + 1] * rho[2 * n + 1];
    for (double t : tau) {
      second.push_back(y + hdir * t);
      second.push_back(y - hdir * t);
    }
  }
  const auto rho2 = norm.radii(second);
  std::size_t k = 0;
  for (std::size_t n = 0; n < pairs.size(); ++n)
    for (std::size_t t = 0; t < tau.size(); ++t, k += 2) {
      const double mp = euclid(second[k]) / rho2[k], mm = euclid(second[k + 1]) / rho2[k + 1];
      if (mp < 1.0 || mm < 1.0) continue;
      const double v = 0.5 * (mp + mm) - 1.0;
      est.value[t] = est.samples[t] == 0 ? v : std::max(est.value[t], v);
      ++est.samples[t];
    }
  return est;
}

}  // namespace qh
