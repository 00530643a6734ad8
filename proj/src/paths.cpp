#include "qh/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qh/errors.hpp"

namespace qh {

namespace {

std::vector<double> cumulative(const NormSpec& norm, const Polyline& path) {
  std::vector<double> s(path.size(), 0.0);
  for (std::size_t i = 1; i < path.size(); ++i) s[i] = s[i - 1] + norm_eval(norm, path[i] - path[i - 1]);
  return s;
}

Point at_length(const Polyline& path, const std::vector<double>& cum, double target) {
  if (target <= 0.0) return path.front();
  if (target >= cum.back()) return path.back();
  const auto it = std::upper_bound(cum.begin(), cum.end(), target);
  const std::size_t j = static_cast<std::size_t>(it - cum.begin());
  const double seg = cum[j] - cum[j - 1];
  const double f = seg > 0.0 ? (target - cum[j - 1]) / seg : 0.0;
  return lerp(path[j - 1], path[j], f);
}

double segment_segment_distance(const Point& p0, const Point& p1, const Point& q0, const Point& q1, Point& where) {
  // Minimum over the four endpoint-to-segment distances unless the segments cross (planar).
  auto orient = [](const Point& a, const Point& b, const Point& c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  };
  const double o1 = orient(p0, p1, q0), o2 = orient(p0, p1, q1);
  const double o3 = orient(q0, q1, p0), o4 = orient(q0, q1, p1);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) {
    const double t = o3 / (o3 - o4);
    where = lerp(p0, p1, t);
    return 0.0;
  }
  auto closest = [](const Point& x, const Point& a, const Point& b) {
    const Point ab = b - a;
    const double l2 = dot(ab, ab);
    const double t = l2 > 0.0 ? std::clamp(dot(x - a, ab) / l2, 0.0, 1.0) : 0.0;
    return lerp(a, b, t);
  };
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](const Point& x, const Point& a, const Point& b) {
    const Point c = closest(x, a, b);
    const double d = euclid(x - c);
    if (d < best) {
      best = d;
      where = (x + c) * 0.5;
    }
  };
  consider(p0, q0, q1);
  consider(p1, q0, q1);
  consider(q0, p0, p1);
  consider(q1, p0, p1);
  return best;
}

}  // namespace

double polyline_length(const NormSpec& norm, const Polyline& path) {
  double s = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) s += norm_eval(norm, path[i] - path[i - 1]);
  return s;
}

Point point_at_fraction(const NormSpec& norm, const Polyline& path, double s) {
  if (path.size() == 0) throw InvalidInput("point_at_fraction: empty path");
  const auto cum = cumulative(norm, path);
  return at_length(path, cum, s * cum.back());
}

Polyline reparametrize(const NormSpec& norm, const Polyline& path, int samples) {
  if (samples < 2) throw InvalidInput("reparametrize: need at least two samples");
  if (path.size() == 0) throw InvalidInput("reparametrize: empty path");
  const auto cum = cumulative(norm, path);
  Polyline out;
  out.interior_free = path.interior_free;
  out.vertices.reserve(samples);
  for (int k = 0; k < samples; ++k) out.vertices.push_back(at_length(path, cum, cum.back() * k / (samples - 1)));
  return out;
}

double sup_distance(const NormSpec& norm, const Polyline& a, const Polyline& b, int samples) {
  const Polyline ra = reparametrize(norm, a, samples), rb = reparametrize(norm, b, samples);
  double m = 0.0;
  for (int k = 0; k < samples; ++k) m = std::max(m, norm_eval(norm, ra[k] - rb[k]));
  return m;
}

double derivative_l1_distance(const NormSpec& norm, const Polyline& a, const Polyline& b, int samples) {
  const Polyline ra = reparametrize(norm, a, samples), rb = reparametrize(norm, b, samples);
  const double dt = 1.0 / (samples - 1);
  double s = 0.0;
  for (int k = 1; k < samples; ++k) {
    const Point da = (ra[k] - ra[k - 1]) / dt, db = (rb[k] - rb[k - 1]) / dt;
    s += norm_eval(norm, da - db) * dt;
  }
  return s;
}

double distance_to_polyline(const NormSpec& norm, const Point& x, const Polyline& path) {
  if (path.size() == 1) return norm_eval(norm, x - path[0]);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < path.size(); ++i) m = std::min(m, segment_distance(norm, x, path[i - 1], path[i]));
  return m;
}

double bbox_diameter(const std::vector<Polyline>& paths) {
  bool any = false;
  Point lo, hi;
  for (const auto& p : paths)
    for (const auto& v : p.vertices) {
      if (!any) {
        lo = hi = v;
        any = true;
        continue;
      }
      for (int i = 0; i < v.dim(); ++i) lo[i] = std::min(lo[i], v[i]), hi[i] = std::max(hi[i], v[i]);
    }
  return any ? euclid(hi - lo) : 0.0;
}

Polyline mirrored(const Polyline& path, int axis) {
  Polyline out = path;
  for (auto& v : out.vertices) v[axis] = -v[axis];
  return out;
}

std::vector<Point> clustered_intersections(const Polyline& a, const Polyline& b, double radius) {
  if (a.size() < 2 || b.size() < 2) throw InvalidInput("clustered_intersections: polylines need two vertices");
  if (a.front().dim() != 2 || b.front().dim() != 2) throw InvalidInput("clustered_intersections: planar polylines only");
  std::vector<Point> hits;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 1; i < a.size(); ++i)
    for (std::size_t j = 1; j < b.size(); ++j) {
      Point where;
      if (segment_segment_distance(a[i - 1], a[i], b[j - 1], b[j], where) < radius) {
        hits.push_back(where);
        pairs.emplace_back(i, j);
      }
    }
  // Single linkage: hits merge when closer than the radius, or when their segment pairs are
  // neighbours on both polylines, so a contact stretch (the curves staying within the radius
  // of each other) collapses to one cluster however coarsely it is sampled.
  auto linked = [&](std::size_t p, std::size_t q) {
    const auto di = pairs[p].first > pairs[q].first ? pairs[p].first - pairs[q].first : pairs[q].first - pairs[p].first;
    const auto dj =
        pairs[p].second > pairs[q].second ? pairs[p].second - pairs[q].second : pairs[q].second - pairs[p].second;
    return (di <= 1 && dj <= 1) || euclid(hits[p] - hits[q]) < radius;
  };
  const std::size_t n = hits.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (linked(i, j)) parent[find(i)] = find(j);
  std::vector<Point> sum;
  std::vector<int> count;
  std::vector<std::size_t> root_of;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    auto it = std::find(root_of.begin(), root_of.end(), r);
    if (it == root_of.end()) {
      root_of.push_back(r);
      sum.push_back(hits[i]);
      count.push_back(1);
    } else {
      const auto k = static_cast<std::size_t>(it - root_of.begin());
      sum[k] += hits[i];
      ++count[k];
    }
  }
  std::vector<Point> centres;
  for (std::size_t k = 0; k < sum.size(); ++k) centres.push_back(sum[k] / count[k]);
  std::sort(centres.begin(), centres.end(), [](const Point& p, const Point& q) { return p[0] < q[0]; });
  return centres;
}

}  // namespace qh
