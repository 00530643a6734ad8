#pragma once

#include <vector>

#include "qh/norm.hpp"
#include "qh/point.hpp"

namespace qh {

double polyline_length(const NormSpec& norm, const Polyline& path);

/// Point at norm-arclength fraction s in [0,1].
Point point_at_fraction(const NormSpec& norm, const Polyline& path, double s);

/// `samples` points at constant norm speed (samples >= 2).
Polyline reparametrize(const NormSpec& norm, const Polyline& path, int samples);

/// Sup-distance between two paths after constant-speed reparametrisation.
double sup_distance(const NormSpec& norm, const Polyline& a, const Polyline& b, int samples = 513);

/// L1 distance between discrete derivatives of the constant-speed reparametrisations
/// (both on [0,1]).
double derivative_l1_distance(const NormSpec& norm, const Polyline& a, const Polyline& b, int samples = 513);

/// Distance from x to the polyline.
double distance_to_polyline(const NormSpec& norm, const Point& x, const Polyline& path);

/// Euclidean diameter of the vertex set's bounding box.
double bbox_diameter(const std::vector<Polyline>& paths);

/// Mirror image x[axis] -> -x[axis].
Polyline mirrored(const Polyline& path, int axis);

/// Clustered common points of two planar polylines: transversal crossings plus stretches
/// closer than `radius`, merged when within `radius` of each other. Returns cluster centres.
std::vector<Point> clustered_intersections(const Polyline& a, const Polyline& b, double radius);

}  // namespace qh
