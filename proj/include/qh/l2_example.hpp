#pragma once

#include <utility>
#include <vector>

namespace qh {

/// Finitely supported point of l^2: (index, coordinate) pairs with 1-based indices.
struct SparsePoint {
  std::vector<std::pair<int, double>> entries;

  double norm2() const;
  double coord(int index) const;
  int max_index() const;
};

/// Radius sqrt2 (1 - 1/i) of the removed axis points at index i >= 2.
double l2_axis_radius(int index);

struct L2Distance {
  double distance = 0.0;
  int nearest_index = 0;   // 0 means the origin
  int nearest_sign = 0;    // +1/-1 for the axis points
  double tail_bound = 0.0; // lower bound for every index beyond the truncation
  int truncation = 0;
};

/// Distance from x to {0} u {+-sqrt2 (1-1/i) e_i : i >= 2}, scanning i <= truncation and
/// certifying that no later index can be closer. Throws CertificationError when the
/// truncation is too small, DomainViolation when x is zero or a removed point.
L2Distance l2_example_distance(const SparsePoint& x, int truncation);

}  // namespace qh
