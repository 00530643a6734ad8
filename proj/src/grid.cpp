// Weighted-lattice shortest paths used to pick the homotopy class of the initial path.
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "qh/errors.hpp"
#include "qh/metric.hpp"
#include "qh/paths.hpp"

namespace qh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Lattice {
  int dim = 2;
  Point lo;
  double h = 0.0;
  std::array<long, 3> n{1, 1, 1};

  long size() const { return n[0] * n[1] * n[2]; }
  Point node(long id) const {
    Point p = lo;
    long r = id;
    for (int i = 0; i < dim; ++i) {
      p[i] += static_cast<double>(r % n[i]) * h;
      r /= n[i];
    }
    return p;
  }
  std::array<long, 3> index(long id) const {
    std::array<long, 3> ix{0, 0, 0};
    for (int i = 0; i < dim; ++i) {
      ix[i] = id % n[i];
      id /= n[i];
    }
    return ix;
  }
  long id(const std::array<long, 3>& ix) const {
    long r = 0;
    for (int i = dim - 1; i >= 0; --i) r = r * n[i] + ix[i];
    return r;
  }
};

std::vector<std::array<long, 3>> stencil(int dim) {
  std::vector<std::array<long, 3>> out;
  if (dim == 2) {
    for (long a = -2; a <= 2; ++a)
      for (long b = -2; b <= 2; ++b) {
        if (a == 0 && b == 0) continue;
        if (std::gcd(std::abs(a), std::abs(b)) != 1) continue;
        out.push_back({a, b, 0});
      }
  } else {
    for (long a = -1; a <= 1; ++a)
      for (long b = -1; b <= 1; ++b)
        for (long c = -1; c <= 1; ++c)
          if (a || b || c) out.push_back({a, b, c});
  }
  return out;
}

bool crosses(const Barrier& bar, const Point& p, const Point& q) {
  const int dim = p.dim();
  if (dim == 2) {
    // Line through the ray origin with normal m; blocked if the segment meets the ray.
    const Point m{-bar.direction[1], bar.direction[0]};
    const double sp = dot(m, p - bar.origin), sq = dot(m, q - bar.origin);
    if ((sp > 0 && sq > 0) || (sp < 0 && sq < 0)) return false;
    if (sp == sq) return false;
    const Point r = lerp(p, q, sp / (sp - sq));
    return dot(bar.direction, r - bar.origin) >= 0.0;
  }
  const Point& a = *bar.axis;
  const Point& d = bar.direction;
  const Point m{a[1] * d[2] - a[2] * d[1], a[2] * d[0] - a[0] * d[2], a[0] * d[1] - a[1] * d[0]};
  const double sp = dot(m, p - bar.origin), sq = dot(m, q - bar.origin);
  if ((sp > 0 && sq > 0) || (sp < 0 && sq < 0)) return false;
  if (sp == sq) return false;
  const Point r = lerp(p, q, sp / (sp - sq)) - bar.origin;
  return dot(a, r) >= 0.0 && dot(d, r) >= 0.0;
}

struct EdgeCost {
  const DomainSpec& domain;
  const GridOptions& opt;

  // Simpson estimate of the segment QH length; +inf when the segment is not certified
  // inside the domain or crosses a barrier.
  double operator()(const Point& p, double cp, const Point& q, double cq) const {
    if (!(cp > 0.0) || !(cq > 0.0)) return kInf;
    const double len = norm_eval(domain.norm(), q - p);
    if (!(cp + cq > len)) return kInf;
    for (const auto& b : opt.barriers)
      if (crosses(b, p, q)) return kInf;
    const double cm = domain.clearance((p + q) * 0.5);
    if (!(cm > 0.0)) return kInf;
    return len / 6.0 * (1.0 / cp + 4.0 / cm + 1.0 / cq);
  }
};

}  // namespace

GridInit grid_init(const DomainSpec& domain, const Point& x, const Point& y, const SolverConfig& s,
                   const GridOptions& options) {
  s.validate();
  const int dim = domain.dimension();
  if (dim != 2 && dim != 3) throw InvalidInput("grid_init: lattice initialisation supports dimensions 2 and 3");
  const double dx = domain.boundary_distance(x), dy = domain.boundary_distance(y);
  GridInit out;
  if (x == y) {
    out.path.vertices = {x, y};
    return out;
  }
  const double len = euclid(y - x);
  const double margin = len + std::min(dx, dy);

  Lattice lat;
  lat.dim = dim;
  lat.lo = Point(dim);
  Point hi(dim);
  const Bounds& bb = domain.bounds();
  for (int i = 0; i < dim; ++i) {
    lat.lo[i] = std::max(std::min(x[i], y[i]) - margin, bb.lower[i]);
    hi[i] = std::min(std::max(x[i], y[i]) + margin, bb.upper[i]);
  }
  double h = std::min(1.0 / s.grid_resolution, len / 8.0);
  for (;;) {
    long total = 1;
    for (int i = 0; i < dim; ++i) {
      lat.n[i] = static_cast<long>(std::floor((hi[i] - lat.lo[i]) / h)) + 1;
      total *= lat.n[i];
    }
    if (total <= s.grid_node_budget) break;
    h *= 1.1;
  }
  // Centre the lattice inside the window so that both window faces are treated alike.
  for (int i = 0; i < dim; ++i) lat.lo[i] += 0.5 * ((hi[i] - lat.lo[i]) - (lat.n[i] - 1) * h);
  lat.h = h;
  out.spacing = h;

  const long N = lat.size();
  std::vector<double> clear(N);
  for (long id = 0; id < N; ++id) clear[id] = domain.clearance(lat.node(id));

  std::vector<double> penalty;
  if (!options.penalised.empty() && options.penalty_radius > 0.0) {
    penalty.assign(N, 1.0);
    for (long id = 0; id < N; ++id) {
      if (!(clear[id] > 0.0)) continue;
      const Point p = lat.node(id);
      if (euclid(p - x) < options.penalty_radius || euclid(p - y) < options.penalty_radius) continue;
      for (const auto& path : options.penalised)
        if (distance_to_polyline(NormSpec{}, p, path) < options.penalty_radius) {
          penalty[id] = options.penalty_factor;
          break;
        }
    }
  }
  auto pen = [&](long id) { return penalty.empty() || id >= N ? 1.0 : penalty[id]; };

  const EdgeCost cost{domain, options};
  const long src = N, dst = N + 1;
  const double attach = 2.5 * h;
  // Grid nodes near an endpoint get a direct edge to it.
  auto attached = [&](const Point& e, double ce) {
    std::vector<std::pair<long, double>> edges;
    std::array<long, 3> lo{0, 0, 0}, up{0, 0, 0};
    for (int i = 0; i < dim; ++i) {
      lo[i] = std::max(0L, static_cast<long>(std::floor((e[i] - attach - lat.lo[i]) / h)));
      up[i] = std::min(lat.n[i] - 1, static_cast<long>(std::ceil((e[i] + attach - lat.lo[i]) / h)));
    }
    for (long c = lo[2]; c <= up[2]; ++c)
      for (long b = lo[1]; b <= up[1]; ++b)
        for (long a = lo[0]; a <= up[0]; ++a) {
          const long id = lat.id({a, b, c});
          const Point p = lat.node(id);
          if (euclid(p - e) > attach) continue;
          const double w = cost(e, ce, p, clear[id]);
          if (w < kInf) edges.emplace_back(id, w);
        }
    return edges;
  };
  const auto from_src = attached(x, dx);
  std::unordered_map<long, double> into_dst;
  for (const auto& [id, w] : attached(y, dy)) into_dst[id] = w;
  if (from_src.empty() || into_dst.empty())
    throw NoPathError("grid_init: an endpoint has no certified lattice neighbour; raise grid_resolution");

  std::vector<double> dist(N + 2, kInf);
  std::vector<long> prev(N + 2, -1);
  using Item = std::pair<double, long>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0.0;
  pq.push({0.0, src});
  const auto offsets = stencil(dim);
  auto relax = [&](long from, long to, double w) {
    const double nd = dist[from] + w;
    if (nd < dist[to]) {
      dist[to] = nd;
      prev[to] = from;
      pq.push({nd, to});
    }
  };
  while (!pq.empty()) {
    const auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[u]) continue;
    if (u == dst) break;
    if (u == src) {
      for (const auto& [id, w] : from_src) relax(src, id, w * pen(id));
      continue;
    }
    const Point pu = lat.node(u);
    const auto iu = lat.index(u);
    for (const auto& off : offsets) {
      std::array<long, 3> iv = iu;
      bool ok = true;
      for (int i = 0; i < dim; ++i) {
        iv[i] += off[i];
        if (iv[i] < 0 || iv[i] >= lat.n[i]) ok = false;
      }
      if (!ok) continue;
      const long v = lat.id(iv);
      if (!(clear[v] > 0.0) || dist[u] + 0.0 >= dist[v]) continue;
      const double w = cost(pu, clear[u], lat.node(v), clear[v]);
      if (w < kInf) relax(u, v, w * std::max(pen(u), pen(v)));
    }
    if (auto it = into_dst.find(u); it != into_dst.end()) relax(u, dst, it->second * pen(u));
  }
  if (!(dist[dst] < kInf))
    throw NoPathError("grid_init: endpoints lie in different lattice components; raise grid_resolution");

  std::vector<Point> rev{y};
  for (long v = prev[dst]; v != src; v = prev[v]) rev.push_back(lat.node(v));
  rev.push_back(x);
  out.path.vertices.assign(rev.rbegin(), rev.rend());
  out.grid_length = dist[dst];
  out.qh_length = qh_path_length(domain, out.path, QuadratureConfig{});
  out.consistency_factor = out.grid_length > 0.0 ? out.qh_length / out.grid_length : 1.0;
  return out;
}

}  // namespace qh
