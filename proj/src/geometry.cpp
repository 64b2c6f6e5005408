#include "lakeice/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lakeice {

LakeOutline make_outline(std::string lake_id, std::vector<Point> vertices) {
    if (!vertices.empty() && vertices.front() == vertices.back()) vertices.pop_back();
    std::vector<Point> distinct;
    for (const Point& p : vertices) {
        if (std::find(distinct.begin(), distinct.end(), p) == distinct.end()) distinct.push_back(p);
    }
    if (distinct.size() < 3)
        throw validation_error("outline '" + lake_id + "': ring needs >= 3 distinct vertices");
    return LakeOutline{std::move(lake_id), std::move(vertices)};
}

double point_segment_distance(Point p, Point a, Point b) {
    const double abx = b.x - a.x, aby = b.y - a.y;
    const double len2 = abx * abx + aby * aby;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.x - a.x) * abx + (p.y - a.y) * aby) / len2, 0.0, 1.0);
    const double dx = p.x - (a.x + t * abx), dy = p.y - (a.y + t * aby);
    return std::hypot(dx, dy);
}

double point_ring_distance(Point p, const LakeOutline& ring) {
    double best = std::numeric_limits<double>::infinity();
    const auto& v = ring.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        best = std::min(best, point_segment_distance(p, v[i], v[(i + 1) % v.size()]));
    }
    return best;
}

bool point_on_ring(Point p, const LakeOutline& ring, double eps) {
    return point_ring_distance(p, ring) <= eps;
}

bool point_in_ring(Point p, const LakeOutline& ring) {
    if (point_on_ring(p, ring)) return false;
    // Even-odd crossing count against a ray towards +x. Half-open vertex rule
    // avoids double counting at shared vertices.
    bool inside = false;
    const auto& v = ring.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % v.size()];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (x_cross > p.x) inside = !inside;
        }
    }
    return inside;
}

namespace {

// Recursive half of Douglas-Peucker over the open chain v[first..last].
void dp_mark(const std::vector<Point>& v, std::size_t first, std::size_t last, double tol,
             std::vector<bool>& keep) {
    if (last <= first + 1) return;
    double worst = -1.0;
    std::size_t worst_i = first;
    for (std::size_t i = first + 1; i < last; ++i) {
        const double d = point_segment_distance(v[i], v[first], v[last]);
        if (d > worst) {
            worst = d;
            worst_i = i;
        }
    }
    if (worst > tol) {
        keep[worst_i] = true;
        dp_mark(v, first, worst_i, tol, keep);
        dp_mark(v, worst_i, last, tol, keep);
    }
}

}  // namespace

LakeOutline generalize_outline(const LakeOutline& outline, double tolerance_m) {
    if (tolerance_m < 0.0) throw validation_error("generalize_outline: negative tolerance");
    LakeOutline valid = make_outline(outline.lake_id, outline.vertices);
    const auto& v = valid.vertices;
    const std::size_t n = v.size();

    // Closed ring: anchor at vertex 0, split at the vertex farthest from the
    // anchor, then simplify the two open chains independently.
    std::size_t split = 0;
    double far = -1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double d = std::hypot(v[i].x - v[0].x, v[i].y - v[0].y);
        if (d > far) {
            far = d;
            split = i;
        }
    }

    std::vector<bool> keep(n, false);
    keep[0] = keep[split] = true;
    dp_mark(v, 0, split, tolerance_m, keep);
    // Second chain wraps around: copy split..n-1 plus the anchor.
    std::vector<Point> tail(v.begin() + long(split), v.end());
    tail.push_back(v[0]);
    std::vector<bool> keep_tail(tail.size(), false);
    keep_tail.front() = keep_tail.back() = true;
    dp_mark(tail, 0, tail.size() - 1, tolerance_m, keep_tail);
    for (std::size_t i = 0; i + 1 < tail.size(); ++i) {
        if (keep_tail[i]) keep[split + i] = true;
    }

    std::vector<Point> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (keep[i]) out.push_back(v[i]);
    }
    if (out.size() < 3) out = {v[0], v[split], v[split == 1 ? n - 1 : 1]};
    return LakeOutline{outline.lake_id, std::move(out)};
}

LakeOutline translate(const LakeOutline& outline, double dx_m, double dy_m) {
    LakeOutline out = outline;
    for (Point& p : out.vertices) {
        p.x += dx_m;
        p.y += dy_m;
    }
    return out;
}

Bounds ring_bounds(const LakeOutline& ring) {
    Bounds b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const Point& p : ring.vertices) {
        b.xmin = std::min(b.xmin, p.x);
        b.ymin = std::min(b.ymin, p.y);
        b.xmax = std::max(b.xmax, p.x);
        b.ymax = std::max(b.ymax, p.y);
    }
    return b;
}

namespace {

std::vector<Point> clip_halfplane(const std::vector<Point>& poly, int axis, double bound,
                                  bool keep_below) {
    std::vector<Point> out;
    const std::size_t n = poly.size();
    auto coord = [axis](const Point& p) { return axis == 0 ? p.x : p.y; };
    auto inside = [&](const Point& p) {
        return keep_below ? coord(p) <= bound : coord(p) >= bound;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % n];
        const bool ia = inside(a), ib = inside(b);
        if (ia) out.push_back(a);
        if (ia != ib) {
            const double t = (bound - coord(a)) / (coord(b) - coord(a));
            out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
    }
    return out;
}

double polygon_area_abs(const std::vector<Point>& poly) {
    double s = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % n];
        s += a.x * b.y - b.x * a.y;
    }
    return std::abs(s) * 0.5;
}

}  // namespace

double ring_rect_intersection_area(const LakeOutline& ring, double xmin, double ymin, double xmax,
                                   double ymax) {
    std::vector<Point> poly = ring.vertices;
    poly = clip_halfplane(poly, 0, xmax, true);
    if (poly.size() < 3) return 0.0;
    poly = clip_halfplane(poly, 0, xmin, false);
    if (poly.size() < 3) return 0.0;
    poly = clip_halfplane(poly, 1, ymax, true);
    if (poly.size() < 3) return 0.0;
    poly = clip_halfplane(poly, 1, ymin, false);
    if (poly.size() < 3) return 0.0;
    return polygon_area_abs(poly);
}

bool segment_intersects_rect(Point a, Point b, double xmin, double ymin, double xmax, double ymax) {
    // Liang-Barsky style parametric clip of segment a->b against the box.
    double t0 = 0.0, t1 = 1.0;
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {a.x - xmin, xmax - a.x, a.y - ymin, ymax - a.y};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return false;
        } else {
            const double r = q[i] / p[i];
            if (p[i] < 0.0) {
                if (r > t1) return false;
                t0 = std::max(t0, r);
            } else {
                if (r < t0) return false;
                t1 = std::min(t1, r);
            }
        }
    }
    return t0 <= t1;
}

}  // namespace lakeice
