#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qh/domain.hpp"

namespace qh {

struct QuadratureConfig {
  enum class Rule { Simpson, Midpoint };
  Rule rule = Rule::Simpson;
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  int max_subdivisions = 1 << 14;

  void validate() const;
};

/// Result of integrating the weight 1/d along a segment. `breaks` holds the accepted
/// leaf partition of [0,1] (first 0, last 1) when requested.
struct SegmentIntegral {
  double value = 0.0;
  std::vector<double> breaks;
};

/// QH length of the straight segment a -> b to absolute tolerance `tol`. Each accepted
/// leaf is certified to stay inside the domain by the 1-Lipschitz bound on d.
/// Throws EvaluationError if the segment leaves the domain or the subdivision budget runs out.
SegmentIntegral integrate_segment(const DomainSpec& domain, const Point& a, const Point& b, double tol,
                                  const QuadratureConfig& q, bool keep_breaks = false);

/// Same rule applied on a fixed leaf partition; smooth in (a, b). Returns +inf when a
/// sample lands outside the domain.
double integrate_segment_frozen(const DomainSpec& domain, const Point& a, const Point& b,
                                std::span<const double> breaks, QuadratureConfig::Rule rule);

/// True when every leaf of the partition of [a,b] satisfies d(t0) + d(t1) > |t1 - t0|.
bool segment_certified(const DomainSpec& domain, const Point& a, const Point& b, int max_depth = 40);

/// Integral of ||c'(t)|| / d(c(t)) over [t0, t1] for a smooth parametric curve.
double integrate_curve(const DomainSpec& domain, const std::function<Point(double)>& position,
                       const std::function<Point(double)>& velocity, double t0, double t1, const QuadratureConfig& q);

}  // namespace qh
