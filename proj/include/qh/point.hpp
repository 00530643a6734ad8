#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qh {

/// Fixed-capacity point/vector in R^2 or R^3.
class Point {
 public:
  static constexpr int kMaxDim = 3;

  Point() = default;
  explicit Point(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("Point: dimension must be 1..3");
  }
  Point(std::initializer_list<double> coords) : dim_(static_cast<int>(coords.size())) {
    if (dim_ < 1 || dim_ > kMaxDim) throw std::invalid_argument("Point: dimension must be 1..3");
    int i = 0;
    for (double c : coords) c_[i++] = c;
  }
  static Point from_span(std::span<const double> coords) {
    Point p(static_cast<int>(coords.size()));
    for (int i = 0; i < p.dim_; ++i) p.c_[i] = coords[i];
    return p;
  }
  static Point unit(int dim, int axis) {
    Point p(dim);
    p.c_[axis] = 1.0;
    return p;
  }

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }
  std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

  bool finite() const {
    for (int i = 0; i < dim_; ++i)
      if (!std::isfinite(c_[i])) return false;
    return true;
  }

  Point& operator+=(const Point& o) {
    for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Point& operator-=(const Point& o) {
    for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Point& operator*=(double s) {
    for (int i = 0; i < dim_; ++i) c_[i] *= s;
    return *this;
  }
  Point& operator/=(double s) {
    for (int i = 0; i < dim_; ++i) c_[i] /= s;
    return *this;
  }
  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(Point a, double s) { return a *= s; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend Point operator/(Point a, double s) { return a /= s; }
  friend Point operator-(Point a) { return a *= -1.0; }
  friend bool operator==(const Point& a, const Point& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

inline double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

/// Euclidean length; used for geometric bookkeeping independent of the ambient norm.
inline double euclid(const Point& a) { return std::sqrt(dot(a, a)); }

inline Point lerp(const Point& a, const Point& b, double t) { return a + (b - a) * t; }

std::string to_string(const Point& p);

/// A finite path with pinned endpoints. Interior vertices are decision variables
/// for the solver unless `interior_free` is false.
struct Polyline {
  std::vector<Point> vertices;
  bool interior_free = true;

  std::size_t size() const { return vertices.size(); }
  const Point& front() const { return vertices.front(); }
  const Point& back() const { return vertices.back(); }
  const Point& operator[](std::size_t i) const { return vertices[i]; }
  Point& operator[](std::size_t i) { return vertices[i]; }
};

}  // namespace qh
