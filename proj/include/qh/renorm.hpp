#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "qh/ball.hpp"

namespace qh {

struct InducedNormOptions {
  /// Relative tolerance of each directional radius root.
  double root_tol = 1e-10;
  /// Relative accuracy claimed for M (the bisection tolerance of the definition).
  double eval_tol = 1e-6;
  /// Re-check convexity of the ball before accepting it (planar domains): midpoints of pairs of
  /// boundary points along `convexity_directions` equally spaced rays must satisfy k <= r + tol.
  bool verify_convexity = true;
  int convexity_directions = 16;
  int convexity_samples = 40;
  double convexity_tol = 1e-4;
  std::uint64_t rng_seed = 1;
  bool parallel = true;
};

/// Minkowski functional M(x) = inf{lambda > 0 : x in lambda B} of the centered ball
/// B = B_k(0, r) of a centrally symmetric convex domain, evaluated as |x| / rho(x / |x|) with
/// rho the directional radius. Radii are cached per direction, canonicalised under the
/// domain's mirror symmetries so that M(-x) = M(x) holds exactly.
class InducedNorm {
 public:
  InducedNorm(DomainSpec domain, double r, const SolverConfig& s = {}, const QuadratureConfig& q = {},
              const InducedNormOptions& opt = {});

  const DomainSpec& domain() const { return domain_; }
  double r() const { return r_; }
  double eval_tol() const { return opt_.eval_tol; }
  bool parallel() const { return opt_.parallel; }
  const ConvexityReport& convexity() const { return convexity_; }

  /// Radius of the ball along the direction u (any nonzero length).
  double radius(const Point& u) const;
  /// Radii for many directions; parallel over directions, identical to sequential calls.
  std::vector<double> radii(const std::vector<Point>& directions) const;
  double operator()(const Point& x) const;
  std::size_t cache_size() const;

 private:
  Point canonical(const Point& u) const;

  DomainSpec domain_;
  double r_;
  SolverConfig solver_;
  QuadratureConfig quadrature_;
  InducedNormOptions opt_;
  ConvexityReport convexity_;
  mutable std::unique_ptr<std::mutex> mutex_ = std::make_unique<std::mutex>();
  mutable std::map<std::vector<double>, double> cache_;
};

/// M(x); 0 at the origin.
double minkowski_eval(const InducedNorm& norm, const Point& x);

struct TriangleViolation {
  Point x;
  Point y;
  double excess = 0.0;  // M(x+y) - M(x) - M(y)
};

struct TriangleReport {
  int pairs = 0;
  double tolerance = 0.0;  // allowed excess relative to M(x) + M(y)
  double max_excess = 0.0;
  std::vector<TriangleViolation> violations;
};

/// Samples pairs (x, y) and checks M(x+y) <= M(x) + M(y) within 3 eval_tol relative. With
/// grid_directions > 0 the pairs are built so that x, y and x+y all point along one of that many
/// equally spaced planar directions, which bounds the number of radius solves; 0 draws
/// unrestricted random directions.
TriangleReport triangle_check(const InducedNorm& norm, int samples, std::uint64_t rng_seed,
                              int grid_directions = 128);

struct HausdorffStep {
  double r = 0.0;
  double scale = 0.0;  // largest |||.|||-size of the ball; the contour is divided by it
  double distance = 0.0;
};

struct HausdorffReport {
  int directions = 0;
  std::vector<HausdorffStep> steps;
  bool strictly_decreasing = false;
};

/// Symmetric Hausdorff distance between the rescaled sphere S_k(0, r) and the boundary of the
/// domain (the unit sphere of its own gauge), both sampled along `directions` planar rays.
/// Throws ResolutionError when a sphere cannot be resolved before the boundary.
HausdorffReport hausdorff_convergence(const DomainSpec& domain, const std::vector<double>& radii,
                                      int directions = 256, const SolverConfig& s = {},
                                      const QuadratureConfig& q = {}, const InducedNormOptions& opt = {});

enum class ModulusKind { Convexity, Smoothness };

struct ModulusEstimate {
  ModulusKind kind = ModulusKind::Convexity;
  std::vector<double> tau;
  /// delta(tau) (sampled infimum, an upper bound of the true modulus) or mu(tau) (sampled
  /// supremum, a lower bound).
  std::vector<double> value;
  /// Admissible samples that contributed to each entry.
  std::vector<int> samples;
  int budget = 0;
  std::string note;
};

/// Sampled modulus of convexity delta(tau) = inf{1 - M((x+y)/2) : M(x) = M(y) = 1, M(x-y) >= tau}
/// or of smoothness mu(tau) = sup{(M(y+h) + M(y-h))/2 - 1 : M(y) = 1, M(h) = tau} restricted to
/// M(y +- h) >= 1. Planar norms; `budget` pairs (structured axis/diagonal ones first).
ModulusEstimate modulus_estimate(const InducedNorm& norm, ModulusKind kind, const std::vector<double>& tau,
                                 int budget, std::uint64_t rng_seed = 1);

/// Distance from `center` to the boundary along the unit direction u (bounded domains).
double ray_exit(const DomainSpec& domain, const Point& center, const Point& u);

}  // namespace qh
