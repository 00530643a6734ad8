#include "qh/l2_example.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qh/errors.hpp"

namespace qh {

double SparsePoint::norm2() const {
  double s = 0.0;
  for (const auto& [i, c] : entries) s += c * c;
  return s;
}

double SparsePoint::coord(int index) const {
  double s = 0.0;
  for (const auto& [i, c] : entries)
    if (i == index) s += c;
  return s;
}

int SparsePoint::max_index() const {
  int m = 0;
  for (const auto& [i, c] : entries)
    if (c != 0.0) m = std::max(m, i);
  return m;
}

double l2_axis_radius(int index) { return std::sqrt(2.0) * (1.0 - 1.0 / index); }

L2Distance l2_example_distance(const SparsePoint& x, int truncation) {
  for (const auto& [i, c] : x.entries) {
    if (i < 1) throw InvalidInput("l2_example_distance: indices are 1-based");
    if (!std::isfinite(c)) throw InvalidInput("l2_example_distance: non-finite coordinate");
  }
  const double n2 = x.norm2();
  if (n2 == 0.0) throw DomainViolation("l2_example_distance: the origin is removed");
  if (x.max_index() > truncation)
    throw CertificationError("l2_example_distance: truncation " + std::to_string(truncation) +
                             " is below the support index " + std::to_string(x.max_index()));

  L2Distance out;
  out.truncation = truncation;
  out.distance = std::sqrt(n2);
  for (int i = 2; i <= truncation; ++i) {
    const double a = l2_axis_radius(i);
    const double c = x.coord(i);
    const double rest = std::max(0.0, n2 - c * c);
    for (int sign : {+1, -1}) {
      const double gap = c - sign * a;
      const double d = std::sqrt(gap * gap + rest);
      if (d < out.distance) {
        out.distance = d;
        out.nearest_index = i;
        out.nearest_sign = sign;
      }
    }
  }
  // Every index beyond the truncation is outside the support, so its distance is
  // sqrt(|x|^2 + a_i^2) with a_i increasing in i.
  const double a_tail = l2_axis_radius(truncation + 1);
  out.tail_bound = std::sqrt(n2 + a_tail * a_tail);
  if (!(out.distance <= out.tail_bound))
    throw CertificationError("l2_example_distance: tail bound not certified");
  if (out.distance == 0.0) throw DomainViolation("l2_example_distance: point is a removed axis point");
  return out;
}

}  // namespace qh
