#include "qh/norm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qh/errors.hpp"

namespace qh {

std::string to_string(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int i = 0; i < p.dim(); ++i) os << (i ? "," : "") << p[i];
  os << ')';
  return os.str();
}

NormSpec NormSpec::pnorm(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidInput("norm exponent p must satisfy 1 < p < inf");
  NormSpec n;
  n.kind = p == 2.0 ? Kind::Euclidean : Kind::PNorm;
  n.p = p;
  return n;
}

double NormSpec::dual_exponent() const {
  if (is_euclidean()) return 2.0;
  return p / (p - 1.0);
}

namespace {

double pnorm_raw(const Point& v, double p) {
  double m = 0.0;
  for (int i = 0; i < v.dim(); ++i) m = std::max(m, std::abs(v[i]));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (int i = 0; i < v.dim(); ++i) s += std::pow(std::abs(v[i]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

// Golden-section minimisation of a convex function on [lo, hi].
template <class F>
double golden_min(F&& f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 90 && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return std::min({f(lo), f(hi), fc, fd});
}

}  // namespace

double norm_eval(const NormSpec& norm, const Point& v) {
  if (!v.finite()) throw InvalidInput("norm_eval: non-finite vector " + to_string(v));
  if (norm.is_euclidean()) return euclid(v);
  return pnorm_raw(v, norm.p);
}

double dual_norm_eval(const NormSpec& norm, const Point& f) {
  if (norm.is_euclidean()) return euclid(f);
  return pnorm_raw(f, norm.dual_exponent());
}

double segment_distance(const NormSpec& norm, const Point& x, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return norm_eval(norm, x - a);
  if (norm.is_euclidean()) {
    const double t = std::clamp(dot(x - a, ab) / len2, 0.0, 1.0);
    return euclid(x - (a + ab * t));
  }
  return golden_min([&](double t) { return pnorm_raw(x - (a + ab * t), norm.p); }, 0.0, 1.0);
}

double ray_distance(const NormSpec& norm, const Point& x, const Point& origin, const Point& direction) {
  const double len2 = dot(direction, direction);
  if (norm.is_euclidean()) {
    const double t = std::max(0.0, dot(x - origin, direction) / len2);
    return euclid(x - (origin + direction * t));
  }
  // Minimiser lies within a few Euclidean projections of the origin (p-norms are
  // within a factor 3 of each other in dimension <= 3).
  const double reach = 4.0 * euclid(x - origin) / std::sqrt(len2) + 1.0;
  return golden_min([&](double t) { return pnorm_raw(x - (origin + direction * t), norm.p); }, 0.0, reach);
}

}  // namespace qh
