#pragma once

#include <string>
#include <vector>

#include "lakeice/core.hpp"

namespace lakeice {

struct Point {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point&) const = default;
};

/// Closed simple ring in projected meters. Vertices are stored without the
/// repeated closing vertex; the edge last->first is implicit.
struct LakeOutline {
    std::string lake_id;
    std::vector<Point> vertices;

    std::size_t size() const { return vertices.size(); }
};

/// Validates ring preconditions (>= 3 distinct vertices after dropping an
/// explicit closing vertex). Throws a validation error on degenerate rings.
LakeOutline make_outline(std::string lake_id, std::vector<Point> vertices);

double point_segment_distance(Point p, Point a, Point b);

/// Minimum distance from p to the ring polyline (all edges incl. the closing one).
double point_ring_distance(Point p, const LakeOutline& ring);

/// Even-odd rule; points exactly on an edge count as NOT inside.
bool point_in_ring(Point p, const LakeOutline& ring);

bool point_on_ring(Point p, const LakeOutline& ring, double eps = 0.0);

/// Douglas-Peucker simplification of the closed ring. The first vertex is the
/// anchor and always retained; the ring is re-closed afterwards. Every
/// retained vertex is an original vertex.
LakeOutline generalize_outline(const LakeOutline& outline, double tolerance_m);

LakeOutline translate(const LakeOutline& outline, double dx_m, double dy_m);

struct Bounds {
    double xmin, ymin, xmax, ymax;
};
Bounds ring_bounds(const LakeOutline& ring);

/// Area of the polygon-rectangle intersection (Sutherland-Hodgman clipping).
/// Used for coverage-fraction masks in shift estimation.
double ring_rect_intersection_area(const LakeOutline& ring, double xmin, double ymin, double xmax,
                                   double ymax);

bool segment_intersects_rect(Point a, Point b, double xmin, double ymin, double xmax, double ymax);

}  // namespace lakeice
