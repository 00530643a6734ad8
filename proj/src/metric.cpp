#include "qh/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>

#include <Eigen/Dense>

#include "qh/errors.hpp"
#include "qh/parallel.hpp"
#include "qh/paths.hpp"

namespace qh {

void SolverConfig::validate() const {
  if (!(grid_resolution > 0.0)) throw InvalidInput("solver grid_resolution must be positive");
  if (grid_node_budget < 16) throw InvalidInput("solver grid_node_budget must be at least 16");
  if (max_iterations < 1) throw InvalidInput("solver max_iterations must be positive");
  if (!(gradient_tol > 0.0) || !(length_rel_tol > 0.0)) throw InvalidInput("solver tolerances must be positive");
  if (vertex_budget < 1) throw InvalidInput("solver vertex_budget must be positive");
  if (seed_count < 1) throw InvalidInput("solver seed_count must be positive");
  if (!(equal_length_rel_tol > 0.0)) throw InvalidInput("solver equal_length_rel_tol must be positive");
}

double qh_path_length(const DomainSpec& domain, const Polyline& path, const QuadratureConfig& q) {
  q.validate();
  if (path.size() < 2) throw InvalidInput("qh_path_length: a path needs at least two vertices");
  for (const auto& v : path.vertices)
    if (!(domain.clearance(v) > 0.0)) throw EvaluationError("qh_path_length: vertex " + to_string(v) + " is outside the domain");
  const double total = polyline_length(domain.norm(), path);
  if (total == 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const double share = norm_eval(domain.norm(), path[i] - path[i - 1]) / total;
    sum += integrate_segment(domain, path[i - 1], path[i], q.abs_tol * share, q).value;
  }
  return sum;
}

namespace {

std::mutex tally_mutex;
LowerBoundTally tally;

void record_gap(double gap) {
  std::lock_guard<std::mutex> lock(tally_mutex);
  ++tally.solved;
  if (gap < -LowerBoundTally::kSlack) ++tally.violations;
  tally.min_gap = std::min(tally.min_gap, gap);
}

}  // namespace

LowerBoundTally lower_bound_tally() {
  std::lock_guard<std::mutex> lock(tally_mutex);
  return tally;
}

void reset_lower_bound_tally() {
  std::lock_guard<std::mutex> lock(tally_mutex);
  tally = LowerBoundTally{};
}

double qh_lower_bound(const DomainSpec& domain, const Point& x, const Point& y) {
  const double dx = domain.boundary_distance(x), dy = domain.boundary_distance(y);
  const double len = norm_eval(domain.norm(), x - y);
  return std::max(std::log1p(len / dx), std::log1p(len / dy));
}

double halfplane_distance_oracle(const Point& x, const Point& y) {
  if (x.dim() != y.dim()) throw InvalidInput("halfplane_distance_oracle: dimension mismatch");
  const int n = x.dim() - 1;
  if (!x.finite() || !y.finite()) throw InvalidInput("halfplane_distance_oracle: non-finite point");
  if (!(x[n] > 0.0) || !(y[n] > 0.0)) throw DomainViolation("halfplane_distance_oracle: points must have positive last coordinate");
  // arccosh(1 + |x-y|^2 / (2 x_n y_n)) written as 2 asinh(...) for accuracy at short range.
  return 2.0 * std::asinh(euclid(x - y) / (2.0 * std::sqrt(x[n] * y[n])));
}

double punctured_distance_oracle(const Point& x, const Point& y) {
  if (x.dim() != y.dim()) throw InvalidInput("punctured_distance_oracle: dimension mismatch");
  if (!x.finite() || !y.finite()) throw InvalidInput("punctured_distance_oracle: non-finite point");
  const double nx = euclid(x), ny = euclid(y);
  if (nx == 0.0 || ny == 0.0) throw DomainViolation("punctured_distance_oracle: the origin is removed");
  const Point ux = x / nx, uy = y / ny;
  const double theta = 2.0 * std::atan2(euclid(ux - uy), euclid(ux + uy));
  const double radial = std::log(nx / ny);
  return std::sqrt(theta * theta + radial * radial);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxSwitches = 6;

struct Seg {
  double value = 0.0;
  std::vector<double> breaks;
};

// Per-solve quadrature context with tighter tolerances than the caller's evaluation
// tolerance, so that descent decisions are not dominated by quadrature noise.
struct Ctx {
  const DomainSpec& domain;
  QuadratureConfig q;
  double rel = 1e-11;

  Seg eval(const Point& a, const Point& b) const {
    auto r = integrate_segment(domain, a, b, 0.0 + 1e-300, q, true);
    return {r.value, std::move(r.breaks)};
  }
  // Leaf partition at a coarse tolerance, used for second derivatives only.
  std::vector<double> coarse_breaks(const Point& a, const Point& b) const {
    QuadratureConfig c = q;
    c.rel_tol = std::max(1e-7, q.rel_tol);
    return integrate_segment(domain, a, b, 1e-300, c, true).breaks;
  }
  double frozen(const Point& a, const Point& b, const std::vector<double>& breaks) const {
    return integrate_segment_frozen(domain, a, b, breaks, q.rule);
  }
  // Cumulative leaf values of a segment (same leaf formula as the adaptive rule).
  std::vector<double> leaf_cumulative(const Point& a, const Point& b, const std::vector<double>& breaks) const {
    std::vector<double> cum(breaks.size(), 0.0);
    for (std::size_t i = 1; i < breaks.size(); ++i) {
      const std::vector<double> one{breaks[i - 1], breaks[i]};
      cum[i] = cum[i - 1] + integrate_segment_frozen(domain, a, b, one, q.rule);
    }
    return cum;
  }
  // Parameter t in [0,1] at which the integral from a reaches `target`.
  double locate(const Point& a, const Point& b, const std::vector<double>& breaks, double target) const {
    const auto cum = leaf_cumulative(a, b, breaks);
    if (target <= 0.0) return 0.0;
    if (target >= cum.back()) return 1.0;
    const auto it = std::upper_bound(cum.begin(), cum.end(), target);
    const std::size_t j = static_cast<std::size_t>(it - cum.begin());
    const double f = (target - cum[j - 1]) / (cum[j] - cum[j - 1]);
    return breaks[j - 1] + f * (breaks[j] - breaks[j - 1]);
  }
};

struct Level {
  std::vector<Point> v;
  std::vector<Seg> seg;
  double total() const {
    double s = 0.0;
    for (const auto& g : seg) s += g.value;
    return s;
  }
};

// Resample `init` into n pieces of equal QH length. Chords between consecutive samples that
// cannot be certified get original vertices inserted until they can.
Level resample(const Ctx& ctx, const Polyline& init, int n) {
  const auto& P = init.vertices;
  std::vector<Seg> segs;
  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < P.size(); ++i) {
    segs.push_back(ctx.eval(P[i - 1], P[i]));
    cum.push_back(cum.back() + segs.back().value);
  }
  const double L = cum.back();
  // Samples expressed as (segment index, parameter) to allow ordered merging with vertices.
  struct Mark {
    double s;  // cumulative QH length
    Point p;
    bool original;
  };
  std::vector<Mark> marks;
  for (std::size_t i = 0; i < P.size(); ++i) marks.push_back({cum[i], P[i], true});
  std::vector<Mark> samples{{0.0, P.front(), true}};
  for (int k = 1; k < n; ++k) {
    const double target = L * k / n;
    const auto it = std::upper_bound(cum.begin(), cum.end(), target);
    const std::size_t j = std::min(static_cast<std::size_t>(it - cum.begin()), P.size() - 1);
    const double t = ctx.locate(P[j - 1], P[j], segs[j - 1].breaks, target - cum[j - 1]);
    samples.push_back({target, lerp(P[j - 1], P[j], t), false});
  }
  samples.push_back({L, P.back(), true});

  std::vector<Point> out{samples.front().p};
  std::size_t next_orig = 1;
  for (std::size_t k = 1; k < samples.size(); ++k) {
    // Original vertices strictly between the two samples, in order.
    std::vector<Point> between;
    while (next_orig < P.size() - 1 && cum[next_orig] < samples[k].s) between.push_back(P[next_orig++]);
    if (next_orig < P.size() - 1 && cum[next_orig] == samples[k].s) ++next_orig;
    // Recursive insertion of the middle original vertex until every chord is certified.
    std::vector<Point> chain;
    auto fill = [&](auto&& self, const Point& a, const Point& b, std::size_t lo, std::size_t hi) -> void {
      if (lo >= hi || segment_certified(ctx.domain, a, b)) return;
      const std::size_t mid = lo + (hi - lo) / 2;
      self(self, a, between[mid], lo, mid);
      chain.push_back(between[mid]);
      self(self, between[mid], b, mid + 1, hi);
    };
    fill(fill, out.back(), samples[k].p, 0, between.size());
    for (const auto& c : chain) out.push_back(c);
    if (euclid(samples[k].p - out.back()) > 0.0) out.push_back(samples[k].p);
  }
  Level lev;
  lev.v = std::move(out);
  for (std::size_t i = 1; i < lev.v.size(); ++i) lev.seg.push_back(ctx.eval(lev.v[i - 1], lev.v[i]));
  return lev;
}

Level split_midpoints(const Ctx& ctx, const Level& in) {
  Level out;
  out.v.push_back(in.v.front());
  for (std::size_t i = 1; i < in.v.size(); ++i) {
    const Point& a = in.v[i - 1];
    const Point& b = in.v[i];
    const double t = ctx.locate(a, b, in.seg[i - 1].breaks, 0.5 * in.seg[i - 1].value);
    const Point m = lerp(a, b, t);
    if (euclid(m - a) > 0.0 && euclid(b - m) > 0.0) out.v.push_back(m);
    out.v.push_back(b);
  }
  for (std::size_t i = 1; i < out.v.size(); ++i) out.seg.push_back(ctx.eval(out.v[i - 1], out.v[i]));
  return out;
}

enum class Update { Moved, Stationary, Blocked };

Update update_vertex(const Ctx& ctx, Level& L, std::size_t i, double gtol) {
  const Point a = L.v[i - 1], b = L.v[i + 1], p = L.v[i];
  const auto& ba = L.seg[i - 1].breaks;
  const auto& bb = L.seg[i].breaks;
  const double f0 = L.seg[i - 1].value + L.seg[i].value;
  const double c = ctx.domain.clearance(p);
  const int dim = p.dim();
  auto F = [&](const Point& q) { return ctx.frozen(a, q, ba) + ctx.frozen(q, b, bb); };

  const double fd = 1e-6 * c;
  Point g(dim);
  for (int k = 0; k < dim; ++k) {
    Point e(dim);
    e[k] = fd;
    g[k] = (F(p + e) - F(p - e)) / (2.0 * fd);
  }
  if (!g.finite()) return Update::Stationary;
  const Point chord = b - a;
  const double cl = euclid(chord);
  if (cl > 0.0) {
    const Point t = chord / cl;
    g -= t * dot(g, t);
  }
  const double gn = euclid(g);
  if (gn * c <= gtol || gn == 0.0) return Update::Stationary;
  const Point dir = -g / gn;

  const double sigma = 1e-3 * std::min({c, euclid(p - a), euclid(b - p)});
  const double F0 = F(p);
  const double curv = (F(p + dir * sigma) + F(p - dir * sigma) - 2.0 * F0) / (sigma * sigma);
  double alpha = curv > 0.0 && std::isfinite(curv) ? gn / curv : 0.25 * c;
  alpha = std::min(alpha, 0.5 * c);
  const double noise = 20.0 * ctx.rel * f0;
  if (0.5 * gn * alpha < noise) return Update::Stationary;

  bool saw_outside = false;
  for (int attempt = 0; attempt < 40; ++attempt, alpha *= 0.5) {
    if (gn * alpha < noise) break;
    const Point qv = p + dir * alpha;
    if (!(ctx.domain.clearance(qv) > 0.0)) {
      saw_outside = true;
      continue;
    }
    try {
      Seg s1 = ctx.eval(a, qv);
      Seg s2 = ctx.eval(qv, b);
      if (s1.value + s2.value < f0 - 1e-4 * alpha * gn) {
        L.v[i] = qv;
        L.seg[i - 1] = std::move(s1);
        L.seg[i] = std::move(s2);
        return Update::Moved;
      }
    } catch (const EvaluationError&) {
      saw_outside = true;
    }
  }
  // No acceptable step. A genuine descent direction whose every trial leaves the domain is a
  // stall; otherwise the vertex sits at a kink or at the quadrature noise floor.
  const double eps = 1e-7 * c;
  const double slope = (F(p + dir * eps) - F0) / eps;
  if (saw_outside && slope < -0.5 * gn) return Update::Blocked;
  return Update::Stationary;
}

// Returns sweeps used; sets `converged` when every vertex is stationary and the last sweep's
// relative decrease is below length_rel_tol.
int optimise(const Ctx& ctx, Level& L, int max_sweeps, double gtol, double rel_tol, std::vector<double>& history,
             bool& converged) {
  const std::size_t n = L.v.size();
  converged = true;
  if (n <= 2) return 0;
  std::vector<char> active(n, 1);
  active[0] = active[n - 1] = 0;
  double prev = L.total();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const bool forward = sweep % 2 == 0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const std::size_t i = forward ? k : n - 1 - k;
      if (!active[i]) continue;
      switch (update_vertex(ctx, L, i, gtol)) {
        case Update::Moved:
          if (i > 1) active[i - 1] = 1;
          if (i + 2 < n) active[i + 1] = 1;
          break;
        case Update::Stationary:
          active[i] = 0;
          break;
        case Update::Blocked:
          throw SolverStalled("refine_path: vertex " + std::to_string(i) + " at " + to_string(L.v[i]) +
                              " has a descent direction but every step leaves the domain");
      }
    }
    const double now = L.total();
    history.push_back(now);
    const double rel = (prev - now) / std::max(now, 1e-300);
    prev = now;
    const bool any = std::any_of(active.begin(), active.end(), [](char c) { return c != 0; });
    if (!any && rel < rel_tol) {
      converged = true;
      return sweep + 1;
    }
  }
  converged = false;
  return max_sweeps;
}

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Local coordinates of one vertex. Free vertices move in all directions. A vertex on a ridge of
// the clearance (two boundary features equally close, where 1/d has a V-shaped kink) moves along
// the ridge only: its position is the projection of base + sum u_k t_k back onto the ridge.
struct Chart {
  int fa = -1, fb = -1;
  int switches = 0;
  int age = 0;  // accepted steps since the last switch
  Point base;
  std::vector<Point> tangent;

  bool ridge() const { return fa >= 0; }
  int size() const { return static_cast<int>(tangent.size()); }
};

Point feature_gradient(const DomainSpec& dom, const Point& x, int k, double h) {
  Point g(x.dim());
  for (int i = 0; i < x.dim(); ++i) {
    Point e(x.dim());
    e[i] = h;
    g[i] = (dom.feature_distance(x + e, k) - dom.feature_distance(x - e, k)) / (2.0 * h);
  }
  return g;
}

// Newton projection onto {d_a = d_b}; returns false if it fails to converge.
bool project_ridge(const DomainSpec& dom, int fa, int fb, Point& z) {
  const double scale = std::max(dom.clearance(z), 1e-12);
  for (int it = 0; it < 20; ++it) {
    const double g = dom.feature_distance(z, fa) - dom.feature_distance(z, fb);
    if (std::abs(g) <= 1e-14 * scale) return dom.clearance(z) > 0.0;
    const double h = 1e-7 * scale;
    const Point grad = feature_gradient(dom, z, fa, h) - feature_gradient(dom, z, fb, h);
    const double n2 = dot(grad, grad);
    if (!(n2 > 1e-12)) return false;
    z -= grad * (g / n2);
  }
  return std::abs(dom.feature_distance(z, fa) - dom.feature_distance(z, fb)) <= 1e-10 * scale &&
         dom.clearance(z) > 0.0;
}

Point ridge_normal(const DomainSpec& dom, const Chart& c) {
  const double h = 1e-7 * std::max(dom.clearance(c.base), 1e-12);
  const Point g = feature_gradient(dom, c.base, c.fa, h) - feature_gradient(dom, c.base, c.fb, h);
  return g / euclid(g);
}

void reset_tangent(const DomainSpec& dom, Chart& c) {
  const int dim = c.base.dim();
  c.tangent.clear();
  if (!c.ridge()) {
    for (int k = 0; k < dim; ++k) c.tangent.push_back(Point::unit(dim, k));
    return;
  }
  // Gram-Schmidt of the coordinate axes against the ridge normal.
  const Point n = ridge_normal(dom, c);
  std::vector<Point> basis{n};
  for (int k = 0; k < dim && static_cast<int>(basis.size()) < dim; ++k) {
    Point v = Point::unit(dim, k);
    for (const auto& b : basis) v -= b * dot(v, b);
    const double len = euclid(v);
    if (len > 1e-6) basis.push_back(v / len);
  }
  c.tangent.assign(basis.begin() + 1, basis.end());
}

// Position of chart coordinates u (size c.size()); nullopt if the ridge projection fails.
std::optional<Point> chart_point(const DomainSpec& dom, const Chart& c, const double* u) {
  Point z = c.base;
  for (int k = 0; k < c.size(); ++k) z += c.tangent[k] * u[k];
  if (c.ridge() && !project_ridge(dom, c.fa, c.fb, z)) return std::nullopt;
  return z;
}

// Gradient and Hessian of one segment's QH length w.r.t. the chart coordinates of its endpoints,
// by central differences on the frozen leaf partition. Pinned endpoints have empty charts.
bool segment_derivatives(const Ctx& ctx, const Chart& ca, const Chart& cb, const std::vector<double>& breaks,
                         const std::vector<double>& coarse, Vec& g, Mat& H) {
  const int na = ca.size(), nb = cb.size();
  const int m = na + nb;
  const double scale = std::min({ctx.domain.clearance(ca.base), ctx.domain.clearance(cb.base), euclid(cb.base - ca.base)});
  const double hg = 1e-6 * scale, hh = 2e-4 * scale;
  bool ok = true;
  auto eval_on = [&](const Vec& d, const std::vector<double>& part) {
    const auto pa = chart_point(ctx.domain, ca, d.data());
    const auto pb = chart_point(ctx.domain, cb, d.data() + na);
    if (!pa || !pb) {
      ok = false;
      return 0.0;
    }
    return ctx.frozen(*pa, *pb, part);
  };
  auto f = [&](const Vec& d) { return eval_on(d, breaks); };
  auto fc = [&](const Vec& d) { return eval_on(d, coarse); };
  g.resize(m);
  H.resize(m, m);
  Vec d = Vec::Zero(m);
  const double f0 = fc(d);
  std::vector<double> fp(m), fm(m);
  for (int i = 0; i < m; ++i) {
    d.setZero();
    d[i] = hg;
    const double gp = f(d);
    d[i] = -hg;
    g[i] = (gp - f(d)) / (2.0 * hg);
    d[i] = hh;
    fp[i] = fc(d);
    d[i] = -hh;
    fm[i] = fc(d);
    H(i, i) = (fp[i] + fm[i] - 2.0 * f0) / (hh * hh);
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      d.setZero();
      d[i] = hh, d[j] = hh;
      const double fpp = fc(d);
      d[i] = -hh, d[j] = -hh;
      const double fmm = fc(d);
      // f(x+hi+hj) + f(x-hi-hj) - f(x+hi) - f(x-hi) - f(x+hj) - f(x-hj) + 2 f(x) = 2 h^2 H_ij
      H(i, j) = H(j, i) = (fpp + fmm - fp[i] - fm[i] - fp[j] - fm[j] + 2.0 * f0) / (2.0 * hh * hh);
    }
  return ok && g.allFinite() && H.allFinite();
}

// Solves (T + lambda * diag-scaling) x = rhs for the block-tridiagonal T; false if not SPD.
bool block_tridiagonal_solve(std::vector<Mat> diag, const std::vector<Mat>& upper, std::vector<Vec> rhs,
                             double lambda, std::vector<Vec>& x) {
  const std::size_t m = diag.size();
  // Blocks with (near-)zero curvature, e.g. vertices free to slide along a straight run, are
  // damped relative to the typical block so that their steps stay bounded.
  double typical = 0.0;
  for (const auto& D : diag) typical += D.trace() / D.rows();
  typical = std::max(typical / static_cast<double>(std::max<std::size_t>(m, 1)), 1e-300);
  for (auto& D : diag) {
    const double mu = std::max(D.trace() / D.rows(), 1e-6 * typical);
    D += std::max(lambda * mu, 1e-9 * typical) * Mat::Identity(D.rows(), D.cols());
  }
  std::vector<Eigen::LLT<Mat>> fac(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (i > 0) {
      const Mat Y = fac[i - 1].solve(upper[i - 1]);
      diag[i] -= upper[i - 1].transpose() * Y;
      rhs[i] -= upper[i - 1].transpose() * fac[i - 1].solve(rhs[i - 1]);
    }
    fac[i].compute(diag[i]);
    if (fac[i].info() != Eigen::Success) return false;
  }
  x.assign(m, Vec());
  for (std::size_t k = m; k-- > 0;) {
    Vec r = rhs[k];
    if (k + 1 < m) r -= upper[k] * x[k + 1];
    x[k] = fac[k].solve(r);
  }
  for (const auto& v : x)
    if (!v.allFinite()) return false;
  return true;
}

int nearest_feature(const DomainSpec& dom, const Point& x) {
  int best = -1;
  double bd = kInf;
  for (int k = 0; k < dom.feature_count(); ++k) {
    const double d = dom.feature_distance(x, k);
    if (d < bd) bd = d, best = k;
  }
  return best;
}

// When a step from p to z crosses a ridge head-on (along the ridge normal), moves z back onto
// the ridge and returns its feature pair; a vertex bouncing across a kink of 1/d otherwise
// stalls the iteration. Oblique crossings are ordinary sliding and left alone.
std::pair<int, int> crossed_ridge(const DomainSpec& dom, const Point& p, Point& z) {
  if (dom.feature_count() < 2) return {-1, -1};
  const int fa = nearest_feature(dom, p), fz = nearest_feature(dom, z);
  if (fa == fz) return {-1, -1};
  const Point s = z - p;
  const double len = euclid(s);
  if (!(len > 0.0)) return {-1, -1};
  Chart c;
  c.fa = fa, c.fb = fz, c.base = p;
  const Point n = ridge_normal(dom, c);
  if (std::abs(dot(s, n)) < 0.5 * len) return {-1, -1};
  const double gp = dom.feature_distance(p, fa) - dom.feature_distance(p, fz);
  const double gz = dom.feature_distance(z, fa) - dom.feature_distance(z, fz);
  Point w = gp != gz ? lerp(p, z, gp / (gp - gz)) : z;
  if (!project_ridge(dom, fa, fz, w) || euclid(w - p) > 2.0 * len) return {-1, -1};
  z = w;
  return {fa, fz};
}

double local_cost(const Ctx& ctx, const Point& a, const Point& p, const Point& b, const Level& L, std::size_t i) {
  return ctx.frozen(a, p, L.seg[i - 1].breaks) + ctx.frozen(p, b, L.seg[i].breaks);
}

// Puts vertices near a ridge onto it when that does not lengthen the path, and releases ridge
// vertices for which leaving the ridge to one side shortens it. Returns true if anything changed.
bool update_charts(const Ctx& ctx, Level& L, std::vector<Chart>& charts) {
  const DomainSpec& dom = ctx.domain;
  const int nf = dom.feature_count();
  bool changed = false;
  for (std::size_t i = 1; i + 1 < L.v.size(); ++i) {
    Chart& c = charts[i];
    if (c.switches >= kMaxSwitches) continue;
    const Point& p = L.v[i];
    const double clear = dom.clearance(p);
    const double noise = 20.0 * ctx.rel * (L.seg[i - 1].value + L.seg[i].value);
    if (c.ridge()) {
      // Only a vertex that has had time to settle along its ridge may leave it.
      if (c.age < 3) continue;
      const Point n = ridge_normal(dom, c);
      const double del = 1e-5 * clear;
      const double f0 = local_cost(ctx, L.v[i - 1], p, L.v[i + 1], L, i);
      const double fp = local_cost(ctx, L.v[i - 1], p + n * del, L.v[i + 1], L, i);
      const double fm = local_cost(ctx, L.v[i - 1], p - n * del, L.v[i + 1], L, i);
      if (std::min(fp, fm) < f0 - noise) {
        c.fa = c.fb = -1;
        ++c.switches;
        c.age = 0;
        reset_tangent(dom, c);
        changed = true;
      }
      continue;
    }
    if (nf < 2) continue;
    int fa = -1, fb = -1;
    double da = kInf, db = kInf;
    for (int k = 0; k < nf; ++k) {
      const double d = dom.feature_distance(p, k);
      if (d < da) {
        fb = fa, db = da;
        fa = k, da = d;
      } else if (d < db) {
        fb = k, db = d;
      }
    }
    if (!(db - da < 0.05 * clear)) continue;
    Point z = p;
    if (!project_ridge(dom, fa, fb, z) || euclid(z - p) > 0.1 * clear) continue;
    try {
      Seg s1 = ctx.eval(L.v[i - 1], z), s2 = ctx.eval(z, L.v[i + 1]);
      if (s1.value + s2.value <= L.seg[i - 1].value + L.seg[i].value + noise) {
        L.v[i] = z;
        L.seg[i - 1] = std::move(s1);
        L.seg[i] = std::move(s2);
        c.fa = fa, c.fb = fb;
        c.base = z;
        ++c.switches;
        c.age = 0;
        reset_tangent(dom, c);
        changed = true;
      }
    } catch (const EvaluationError&) {
    }
  }
  return changed;
}

// Vertices that drift together trap the descent at the kink of |b - a| at a = b; such levels are
// re-spaced to equal QH length.
bool collapsed(const Level& L) {
  if (L.seg.size() < 2) return false;
  const double mean = L.total() / static_cast<double>(L.seg.size());
  for (const auto& s : L.seg)
    if (s.value < 0.02 * mean) return true;
  return false;
}

struct NewtonOutcome {
  int iterations = 0;
  bool converged = false;
  bool needs_fallback = false;
};

// Damped Newton on all free vertices at once, in chart coordinates. Converged when every vertex
// satisfies |grad| * d <= gtol (or the predicted decrease is below the quadrature noise floor)
// and the last accepted step decreased the length by a relative amount below rel_tol.
NewtonOutcome newton(const Ctx& ctx, Level& L, int max_iter, double gtol, double rel_tol, std::vector<double>& history) {
  NewtonOutcome out;
  const std::size_t n = L.v.size();
  if (n <= 2) {
    out.converged = true;
    return out;
  }
  const std::size_t m = n - 2;
  std::vector<Chart> charts(n);
  for (std::size_t i = 0; i < n; ++i) {
    charts[i].base = L.v[i];
    if (i > 0 && i + 1 < n) reset_tangent(ctx.domain, charts[i]);
  }
  double lambda = 1e-6;
  double last_rel = kInf;
  double total = L.total();
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    if (collapsed(L)) return out;
    if (update_charts(ctx, L, charts)) {
      const double t = L.total();
      if (t < total) {
        last_rel = (total - t) / t;
        history.push_back(t);
      }
      total = t;
    }
    std::vector<Mat> diag(m), upper(m - 1);
    std::vector<Vec> grad(m);
    for (std::size_t i = 0; i < m; ++i) {
      const int k = charts[i + 1].size();
      diag[i] = Mat::Zero(k, k);
      grad[i] = Vec::Zero(k);
      if (i + 1 < m) upper[i] = Mat::Zero(k, charts[i + 2].size());
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
      Vec g;
      Mat H;
      const auto coarse = ctx.coarse_breaks(L.v[j], L.v[j + 1]);
      if (!segment_derivatives(ctx, charts[j], charts[j + 1], L.seg[j].breaks, coarse, g, H)) {
        out.needs_fallback = true;
        return out;
      }
      // Segments beside a ridge can have negative curvature; flipping it (rather than damping the
      // whole system) keeps full Newton steps for the slow modes along the path.
      if (H.rows() > 0) {
        Eigen::SelfAdjointEigenSolver<Mat> es(H);
        if (es.eigenvalues()[0] < 0.0)
          H = es.eigenvectors() * es.eigenvalues().cwiseAbs().asDiagonal() * es.eigenvectors().transpose();
      }
      const int ka = charts[j].size(), kb = charts[j + 1].size();
      // Segment j couples vertex j and vertex j+1; free index = vertex - 1.
      if (ka > 0) {
        diag[j - 1] += H.topLeftCorner(ka, ka);
        grad[j - 1] += g.head(ka);
      }
      if (kb > 0) {
        diag[j] += H.bottomRightCorner(kb, kb);
        grad[j] += g.tail(kb);
      }
      if (ka > 0 && kb > 0) upper[j - 1] += H.topRightCorner(ka, kb);
    }
    std::vector<double> clear(m);
    double score = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      clear[i] = ctx.domain.clearance(L.v[i + 1]);
      score = std::max(score, grad[i].norm() * clear[i]);
    }
    const double noise = 20.0 * ctx.rel * total;
    if (score <= gtol && last_rel < rel_tol) {
      out.converged = true;
      return out;
    }
    std::vector<Vec> rhs(m);
    for (std::size_t i = 0; i < m; ++i) rhs[i] = -grad[i];
    bool accepted = false;
    for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
      std::vector<Vec> step;
      if (!block_tridiagonal_solve(diag, upper, rhs, lambda, step)) {
        lambda = std::max(lambda * 10.0, 1e-8);
        continue;
      }
      double slope = 0.0, reach = 16.0;
      for (std::size_t i = 0; i < m; ++i) {
        slope += grad[i].dot(step[i]);
        const double len = step[i].norm();
        if (len > 0.0) reach = std::min(reach, 0.5 * clear[i] / len);
      }
      const double cap = std::min(1.0, reach);
      if (!(slope < 0.0)) {
        lambda *= 10.0;
        continue;
      }
      if (-0.5 * slope < noise) {
        // Remaining progress is below what the quadrature can resolve.
        out.converged = true;
        return out;
      }
      struct Trial {
        Level level;
        std::vector<std::pair<int, int>> activate;
      };
      auto try_step = [&](double alpha) -> std::optional<Trial> {
        Trial tr;
        tr.level.v = L.v;
        tr.activate.assign(m, {-1, -1});
        for (std::size_t i = 0; i < m; ++i) {
          const Vec u = alpha * step[i];
          auto z = chart_point(ctx.domain, charts[i + 1], u.data());
          if (!z || !(ctx.domain.clearance(*z) > 0.0)) return std::nullopt;
          if (!charts[i + 1].ridge() && charts[i + 1].switches < kMaxSwitches)
            tr.activate[i] = crossed_ridge(ctx.domain, L.v[i + 1], *z);
          tr.level.v[i + 1] = *z;
        }
        try {
          for (std::size_t j = 0; j + 1 < n; ++j) tr.level.seg.push_back(ctx.eval(tr.level.v[j], tr.level.v[j + 1]));
        } catch (const EvaluationError&) {
          return std::nullopt;
        }
        return tr;
      };
      std::optional<Trial> best;
      double best_alpha = 0.0;
      for (double alpha = cap; alpha * -slope > noise; alpha *= 0.5) {
        auto tr = try_step(alpha);
        if (tr && tr->level.total() < total + 1e-4 * alpha * slope) {
          best = std::move(tr);
          best_alpha = alpha;
          break;
        }
      }
      // A full step that beats the quadratic model by a wide margin means the model curvature is
      // too high along the step (typically from a kink); keep doubling while it pays off.
      if (best && best_alpha == 1.0 && total - best->level.total() > -0.75 * slope) {
        for (double alpha = 2.0; alpha <= reach; alpha *= 2.0) {
          auto tr = try_step(alpha);
          if (!tr || !(tr->level.total() < best->level.total())) break;
          best = std::move(tr);
        }
      }
      if (best) {
        const double t = best->level.total();
        last_rel = (total - t) / t;
        total = t;
        L = std::move(best->level);
        history.push_back(total);
        accepted = true;
        lambda = std::max(lambda * 0.1, 1e-12);
        for (std::size_t i = 1; i + 1 < n; ++i) {
          Chart& c = charts[i];
          c.base = L.v[i];
          ++c.age;
          if (best->activate[i - 1].first >= 0) {
            c.fa = best->activate[i - 1].first, c.fb = best->activate[i - 1].second;
            ++c.switches;
            c.age = 0;
          }
          reset_tangent(ctx.domain, c);
        }
      }
      if (!accepted) lambda *= 10.0;
    }
    if (!accepted) {
      out.needs_fallback = true;
      return out;
    }
  }
  return out;
}

}  // namespace

GeodesicResult refine_path(const DomainSpec& domain, const Polyline& init, const SolverConfig& s,
                           const QuadratureConfig& q) {
  s.validate();
  q.validate();
  if (init.size() < 2) throw InvalidInput("refine_path: initial path needs at least two vertices");
  for (const auto& v : init.vertices)
    if (!(domain.clearance(v) > 0.0)) throw EvaluationError("refine_path: vertex " + to_string(v) + " is outside the domain");
  Ctx ctx{domain, q};
  ctx.rel = std::clamp(q.rel_tol * 1e-3, 1e-13, 1e-9);
  ctx.q.rel_tol = ctx.rel;
  ctx.q.abs_tol = 1e-300;

  GeodesicResult res;
  const Point x = init.front(), y = init.back();
  if (x == y) {
    res.path.vertices = {x, y};
    res.converged = true;
    res.refinement_history = {0.0};
    return res;
  }
  if (!init.interior_free) {
    res.path = init;
    res.qh_length = qh_path_length(domain, init, q);
    res.refinement_history = {res.qh_length};
    res.converged = true;
    res.lower_bound_gap = res.qh_length - qh_lower_bound(domain, x, y);
    record_gap(res.lower_bound_gap);
    return res;
  }

  std::vector<int> sizes{s.vertex_budget};
  while (sizes.back() >= 16 && sizes.back() % 2 == 0) sizes.push_back(sizes.back() / 2);
  std::reverse(sizes.begin(), sizes.end());

  Level L = resample(ctx, init, sizes.front());
  res.refinement_history.push_back(L.total());
  bool converged = false;
  for (std::size_t lv = 0; lv < sizes.size(); ++lv) {
    const bool last = lv + 1 == sizes.size();
    const double gtol = last ? s.gradient_tol : s.gradient_tol * 100.0;
    const int sweeps = last ? s.max_iterations : std::max(1, s.max_iterations / 4);
    // Newton stagnates where the path runs along a kink of 1/d; the vertex-wise pass then
    // settles each vertex against the kink.
    const int newton_cap = last ? std::max(20, s.max_iterations / 16) : std::max(10, s.max_iterations / 32);
    // Alternate Newton with short vertex-wise bursts until either converges or the budgets run out.
    int newton_left = newton_cap, sweeps_left = sweeps;
    NewtonOutcome nt;
    converged = false;
    while (!converged) {
      if (collapsed(L)) {
        L = resample(ctx, Polyline{L.v}, static_cast<int>(L.seg.size()));
        res.refinement_history.push_back(L.total());
      }
      if (newton_left > 0) {
        nt = newton(ctx, L, newton_left, gtol, s.length_rel_tol, res.refinement_history);
        newton_left -= std::max(nt.iterations, 1);
        res.iterations += nt.iterations;
        converged = nt.converged;
        if (converged) break;
      }
      if (sweeps_left <= 0) break;
      const int burst = newton_left > 0 ? std::min(sweeps_left, 8) : sweeps_left;
      const int used = optimise(ctx, L, burst, gtol, s.length_rel_tol, res.refinement_history, converged);
      sweeps_left -= burst;
      res.iterations += used;
    }
    if (!last) {
      L = split_midpoints(ctx, L);
      res.refinement_history.push_back(L.total());
    }
  }
  res.path.vertices = L.v;
  res.qh_length = L.total();
  res.converged = converged;
  res.lower_bound_gap = res.qh_length - qh_lower_bound(domain, x, y);
  record_gap(res.lower_bound_gap);
  return res;
}

GeodesicResult qh_distance(const DomainSpec& domain, const Point& x, const Point& y, const SolverConfig& s,
                           const QuadratureConfig& q) {
  s.validate();
  q.validate();
  domain.boundary_distance(x);
  domain.boundary_distance(y);
  if (x == y) {
    GeodesicResult r;
    r.path.vertices = {x, y};
    r.converged = true;
    r.refinement_history = {0.0};
    return r;
  }
  // Solve in a canonical endpoint order so that k(x,y) and k(y,x) are the same computation.
  const bool swap = std::lexicographical_compare(y.coords().begin(), y.coords().end(), x.coords().begin(),
                                                 x.coords().end());
  const Point& a = swap ? y : x;
  const Point& b = swap ? x : y;
  Polyline init;
  if (domain.convex() && segment_certified(domain, a, b))
    init.vertices = {a, b};
  else
    init = grid_init(domain, a, b, s).path;
  GeodesicResult r = refine_path(domain, init, s, q);
  if (swap) std::reverse(r.path.vertices.begin(), r.path.vertices.end());
  return r;
}

namespace {

struct Obstacle {
  Point origin;
  std::optional<Point> axis;  // removed ray direction in 3-D
  Point side;                 // unit normal selecting the two sides
};

std::vector<Obstacle> obstacles(const DomainSpec& domain, const Point& x, const Point& y) {
  std::vector<Obstacle> out;
  const int dim = domain.dimension();
  const Point c = y - x;
  const double len = euclid(c);
  if (len == 0.0) return out;
  const Point u = c / len;
  for (const auto& r : domain.removals()) {
    if (const auto* p = std::get_if<RemovedPoint>(&r); p && dim == 2) {
      const double t = dot(p->at - x, u) / len;
      const double off = euclid(p->at - x - u * (t * len));
      if (t > 0.0 && t < 1.0 && off < 0.5 * len) out.push_back({p->at, std::nullopt, Point{-u[1], u[0]}});
    } else if (const auto* ray = std::get_if<RemovedRay>(&r); ray && dim == 3) {
      const Point a = ray->direction / euclid(ray->direction);
      const Point nrm{a[1] * u[2] - a[2] * u[1], a[2] * u[0] - a[0] * u[2], a[0] * u[1] - a[1] * u[0]};
      const double nn = euclid(nrm);
      if (nn < 1e-12) continue;
      // Closest approach between the chord and the ray's supporting line.
      const Point side = nrm / nn;
      const Point w = x - ray->origin;
      const double sep = std::abs(dot(w, side));
      const double b = dot(a, u), d = dot(a, w), e = dot(u, w);
      const double den = 1.0 - b * b;
      const double tc = (b * d - e) / den;  // chord parameter (length units)
      const double sr = (d - b * e) / den;  // ray parameter
      if (sep < 0.5 * len && tc > 0.0 && tc < len && sr >= 0.0) out.push_back({ray->origin, a, side});
    }
  }
  return out;
}

}  // namespace

int side_obstacle_count(const DomainSpec& domain, const Point& x, const Point& y) {
  return static_cast<int>(obstacles(domain, x, y).size());
}

std::vector<Barrier> side_barriers(const DomainSpec& domain, const Point& x, const Point& y, unsigned pattern) {
  std::vector<Barrier> out;
  const auto obs = obstacles(domain, x, y);
  for (std::size_t k = 0; k < obs.size(); ++k) {
    // Passing on the +side of an obstacle means the wall goes out the -side, and vice versa.
    const bool plus = (pattern >> k) & 1u;
    out.push_back({obs[k].origin, plus ? -obs[k].side : obs[k].side, obs[k].axis});
  }
  return out;
}

std::vector<GeodesicResult> geodesic_multiplicity(const DomainSpec& domain, const Point& x, const Point& y,
                                                  const SolverConfig& s, const QuadratureConfig& q) {
  s.validate();
  if (s.seed_count < 2) throw InvalidInput("geodesic_multiplicity: seed_count must be at least 2");
  domain.boundary_distance(x);
  domain.boundary_distance(y);
  if (x == y) return {qh_distance(domain, x, y, s, q)};

  std::vector<Polyline> seeds;
  auto try_grid = [&](const GridOptions& opt) {
    try {
      seeds.push_back(grid_init(domain, x, y, s, opt).path);
      return true;
    } catch (const NoPathError&) {
      return false;
    }
  };
  const int m = side_obstacle_count(domain, x, y);
  bool exhaustive = false;
  if (m > 0 && m < 31) {
    const unsigned total = 1u << m;
    std::vector<unsigned> patterns;
    exhaustive = total <= static_cast<unsigned>(s.seed_count);
    if (exhaustive) {
      for (unsigned p = 0; p < total; ++p) patterns.push_back(p);
    } else {
      patterns = {0u, total - 1};
      std::mt19937_64 rng(s.rng_seed);
      std::uniform_int_distribution<unsigned> pick(0, total - 1);
      while (patterns.size() < static_cast<std::size_t>(s.seed_count)) {
        const unsigned p = pick(rng);
        if (std::find(patterns.begin(), patterns.end(), p) == patterns.end()) patterns.push_back(p);
      }
    }
    for (unsigned p : patterns) try_grid(GridOptions{side_barriers(domain, x, y, p), {}, 0.0, 4.0});
  } else {
    if (domain.convex() && segment_certified(domain, x, y))
      seeds.push_back(Polyline{{x, y}});
    else
      try_grid({});
    GridOptions opt;
    opt.penalty_radius = 0.25 * euclid(y - x);
    for (int k = 1; k < s.seed_count && !seeds.empty(); ++k) {
      opt.penalised = seeds;
      if (!try_grid(opt)) break;
    }
  }
  // Reflected seeds for mirror symmetries fixing both endpoints (redundant when every side
  // pattern has been seeded already).
  const std::size_t base = seeds.size();
  for (int axis = 0; axis < domain.dimension() && !exhaustive; ++axis) {
    if (x[axis] != 0.0 || y[axis] != 0.0 || !domain.mirror_symmetric(axis)) continue;
    for (std::size_t k = 0; k < base; ++k) seeds.push_back(mirrored(seeds[k], axis));
  }

  std::vector<std::optional<GeodesicResult>> refined(seeds.size());
  for_each_index(seeds.size(), true, [&](std::size_t k) {
    try {
      GeodesicResult r = refine_path(domain, seeds[k], s, q);
      if (r.converged) refined[k] = std::move(r);
    } catch (const SolverStalled&) {
    } catch (const EvaluationError&) {
    }
  });
  std::vector<GeodesicResult> done;
  for (auto& r : refined)
    if (r) done.push_back(std::move(*r));
  if (done.empty()) throw SolverError("geodesic_multiplicity: no seed converged");
  double best = kInf;
  for (const auto& r : done) best = std::min(best, r.qh_length);
  std::vector<Polyline> paths;
  for (const auto& r : done) paths.push_back(r.path);
  const double diam = bbox_diameter(paths);
  std::vector<GeodesicResult> out;
  for (auto& r : done) {
    if (r.qh_length > best * (1.0 + s.equal_length_rel_tol)) continue;
    bool dup = false;
    for (const auto& o : out)
      if (sup_distance(domain.norm(), o.path, r.path) < 1e-2 * diam) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace qh
