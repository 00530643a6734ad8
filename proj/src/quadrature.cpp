#include "qh/quadrature.hpp"

#include <cmath>
#include <limits>

#include "qh/errors.hpp"

namespace qh {

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw InvalidInput("quadrature tolerances must be positive");
  if (max_subdivisions < 1) throw InvalidInput("quadrature max_subdivisions must be >= 1");
}

namespace {

constexpr int kMaxDepth = 48;

// Shared adaptive driver over a scalar integrand in t with a per-sample clearance.
struct Adaptive {
  const std::function<double(double)>& clearance;  // c(t)
  const std::function<double(double)>& speed;      // ||c'(t)||
  const std::function<double(double, double)>& chord;  // euclidean-norm length bound between t's
  QuadratureConfig::Rule rule;
  double rel_tol;
  int budget;
  std::vector<double>* breaks;
  int leaves = 0;

  double f(double t, double c) const { return speed(t) / c; }

  double sample(double t) const {
    const double c = clearance(t);
    if (!(c > 0.0)) throw EvaluationError("path leaves the domain at parameter " + std::to_string(t));
    return c;
  }

  bool certified(double ta, double ca, double tb, double cb) const { return ca + cb > chord(ta, tb); }

  // Simpson on [a,b] with clearances at a, m, b.
  double simpson(double a, double b, double ca, double cm, double cb) const {
    const double m = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a, ca) + 4.0 * f(m, cm) + f(b, cb));
  }

  double simpson_rec(double a, double b, double ca, double cm, double cb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double cl = sample(lm), cr = sample(rm);
    const double left = simpson(a, m, ca, cl, cm);
    const double right = simpson(m, b, cm, cr, cb);
    const double err = left + right - whole;
    const bool cert = certified(a, ca, lm, cl) && certified(lm, cl, m, cm) && certified(m, cm, rm, cr) &&
                      certified(rm, cr, b, cb);
    const double target = std::max(tol, rel_tol * std::abs(left + right));
    if ((std::abs(err) <= 15.0 * target && cert) || depth >= kMaxDepth || leaves >= budget) {
      if (!cert) throw EvaluationError("segment could not be certified inside the domain");
      if (std::abs(err) > 15.0 * target) throw EvaluationError("quadrature tolerance unreachable within max_subdivisions");
      ++leaves;
      if (breaks) breaks->push_back(b);
      return left + right + err / 15.0;
    }
    return simpson_rec(a, m, ca, cl, cm, left, 0.5 * tol, depth + 1) +
           simpson_rec(m, b, cm, cr, cb, right, 0.5 * tol, depth + 1);
  }

  // Midpoint rule on [a,b] uses only the centre; certification needs the endpoints too.
  double midpoint_rec(double a, double b, double ca, double cb, double cm, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double cl = sample(lm), cr = sample(rm);
    const double left = (m - a) * f(lm, cl);
    const double right = (b - m) * f(rm, cr);
    const double err = left + right - whole;
    const bool cert = certified(a, ca, lm, cl) && certified(lm, cl, m, cm) && certified(m, cm, rm, cr) &&
                      certified(rm, cr, b, cb);
    const double target = std::max(tol, rel_tol * std::abs(left + right));
    if ((std::abs(err) <= 3.0 * target && cert) || depth >= kMaxDepth || leaves >= budget) {
      if (!cert) throw EvaluationError("segment could not be certified inside the domain");
      if (std::abs(err) > 3.0 * target) throw EvaluationError("quadrature tolerance unreachable within max_subdivisions");
      ++leaves;
      if (breaks) breaks->push_back(b);
      return left + right + err / 3.0;
    }
    return midpoint_rec(a, m, ca, cm, cl, left, 0.5 * tol, depth + 1) +
           midpoint_rec(m, b, cm, cb, cr, right, 0.5 * tol, depth + 1);
  }

  double run(double t0, double t1, double tol) {
    const double c0 = sample(t0), c1 = sample(t1);
    const double tm = 0.5 * (t0 + t1);
    const double cm = sample(tm);
    if (breaks) breaks->push_back(t0);
    if (rule == QuadratureConfig::Rule::Simpson)
      return simpson_rec(t0, t1, c0, cm, c1, simpson(t0, t1, c0, cm, c1), tol, 0);
    return midpoint_rec(t0, t1, c0, c1, cm, (t1 - t0) * f(tm, cm), tol, 0);
  }
};

}  // namespace

SegmentIntegral integrate_segment(const DomainSpec& domain, const Point& a, const Point& b, double tol,
                                  const QuadratureConfig& q, bool keep_breaks) {
  SegmentIntegral out;
  const Point ab = b - a;
  const double len = norm_eval(domain.norm(), ab);
  if (len == 0.0) {
    if (keep_breaks) out.breaks = {0.0, 1.0};
    return out;
  }
  const std::function<double(double)> clr = [&](double t) { return domain.clearance(a + ab * t); };
  const std::function<double(double)> speed = [&](double) { return len; };
  const std::function<double(double, double)> chord = [&](double s, double t) { return len * (t - s); };
  Adaptive ad{clr, speed, chord, q.rule, q.rel_tol, q.max_subdivisions, keep_breaks ? &out.breaks : nullptr};
  out.value = ad.run(0.0, 1.0, tol);
  return out;
}

double integrate_segment_frozen(const DomainSpec& domain, const Point& a, const Point& b,
                                std::span<const double> breaks, QuadratureConfig::Rule rule) {
  const Point ab = b - a;
  const double len = norm_eval(domain.norm(), ab);
  if (len == 0.0) return 0.0;
  auto w = [&](double t) {
    const double c = domain.clearance(a + ab * t);
    return c > 0.0 ? 1.0 / c : std::numeric_limits<double>::infinity();
  };
  double total = 0.0;
  if (rule == QuadratureConfig::Rule::Simpson) {
    double wa = w(breaks[0]);
    for (std::size_t i = 1; i < breaks.size(); ++i) {
      const double t0 = breaks[i - 1], t1 = breaks[i];
      const double h = t1 - t0, m = 0.5 * (t0 + t1);
      const double wl = w(0.5 * (t0 + m)), wm = w(m), wr = w(0.5 * (m + t1)), wb = w(t1);
      const double whole = h / 6.0 * (wa + 4.0 * wm + wb);
      const double halves = h / 12.0 * (wa + 4.0 * wl + wm) + h / 12.0 * (wm + 4.0 * wr + wb);
      total += halves + (halves - whole) / 15.0;
      wa = wb;
    }
  } else {
    for (std::size_t i = 1; i < breaks.size(); ++i) {
      const double t0 = breaks[i - 1], t1 = breaks[i];
      const double h = t1 - t0, m = 0.5 * (t0 + t1);
      const double whole = h * w(m);
      const double halves = 0.5 * h * (w(0.5 * (t0 + m)) + w(0.5 * (m + t1)));
      total += halves + (halves - whole) / 3.0;
    }
  }
  return len * total;
}

bool segment_certified(const DomainSpec& domain, const Point& a, const Point& b, int max_depth) {
  const Point ab = b - a;
  const double len = norm_eval(domain.norm(), ab);
  struct Item {
    double t0, t1, c0, c1;
    int depth;
  };
  const double ca = domain.clearance(a), cb = domain.clearance(b);
  if (!(ca > 0.0) || !(cb > 0.0)) return false;
  std::vector<Item> stack{{0.0, 1.0, ca, cb, 0}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    if (it.c0 + it.c1 > len * (it.t1 - it.t0)) continue;
    if (it.depth >= max_depth) return false;
    const double m = 0.5 * (it.t0 + it.t1);
    const double cm = domain.clearance(a + ab * m);
    if (!(cm > 0.0)) return false;
    stack.push_back({it.t0, m, it.c0, cm, it.depth + 1});
    stack.push_back({m, it.t1, cm, it.c1, it.depth + 1});
  }
  return true;
}

double integrate_curve(const DomainSpec& domain, const std::function<Point(double)>& position,
                       const std::function<Point(double)>& velocity, double t0, double t1, const QuadratureConfig& q) {
  q.validate();
  const std::function<double(double)> clr = [&](double t) { return domain.clearance(position(t)); };
  const std::function<double(double)> speed = [&](double t) { return norm_eval(domain.norm(), velocity(t)); };
  // Chord bound between nearby parameters: the secant length, valid for the sampled
  // resolution of a smooth curve.
  const std::function<double(double, double)> chord = [&](double s, double t) {
    return norm_eval(domain.norm(), position(t) - position(s));
  };
  Adaptive ad{clr, speed, chord, q.rule, q.rel_tol, q.max_subdivisions, nullptr};
  return ad.run(t0, t1, q.abs_tol);
}

}  // namespace qh
