#pragma once

#include "qh/point.hpp"

namespace qh {

/// Ambient norm of the space: Euclidean or a p-norm with 1 < p < inf.
struct NormSpec {
  enum class Kind { Euclidean, PNorm };
  Kind kind = Kind::Euclidean;
  double p = 2.0;

  static NormSpec euclidean() { return {}; }
  static NormSpec pnorm(double p);

  bool is_euclidean() const { return kind == Kind::Euclidean || p == 2.0; }
  /// Exponent q of the dual norm, 1/p + 1/q = 1.
  double dual_exponent() const;
};

/// ||v|| under `norm`. Throws InvalidInput on non-finite input.
double norm_eval(const NormSpec& norm, const Point& v);

/// Dual norm ||f||_* of a linear functional given by its coefficient vector.
double dual_norm_eval(const NormSpec& norm, const Point& f);

/// Distance from x to the closed segment [a,b] (a == b allowed).
double segment_distance(const NormSpec& norm, const Point& x, const Point& a, const Point& b);

/// Distance from x to the closed ray {origin + s*direction : s >= 0}.
double ray_distance(const NormSpec& norm, const Point& x, const Point& origin, const Point& direction);

}  // namespace qh
