#include "cfu/geometry.hpp"

#include <algorithm>
#include <limits>

namespace cfu {

double polygon_signed_area(const Polygon& poly) {
    double area = 0.0;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        area += a.cross(b);
    }
    return 0.5 * area;
}

bool point_in_polygon(const Vec2& p, const Polygon& poly) {
    bool inside = false;
    const size_t n = poly.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        const bool crosses = (a.y > p.y) != (b.y > p.y);
        if (crosses) {
            const double x_at = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < x_at) inside = !inside;
        }
    }
    return inside;
}

double distance_point_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len_sq = ab.norm_sq();
    if (len_sq == 0.0) return distance(p, a);
    double t = (p - a).dot(ab) / len_sq;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + ab * t);
}

double distance_to_polygon_boundary(const Vec2& p, const Polygon& poly) {
    double best = std::numeric_limits<double>::infinity();
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        best = std::min(best, distance_point_segment(p, poly[i], poly[(i + 1) % n]));
    }
    return best;
}

namespace {

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double v = (b - a).cross(c - a);
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
    const int o1 = orientation(a0, a1, b0);
    const int o2 = orientation(a0, a1, b1);
    const int o3 = orientation(b0, b1, a0);
    const int o4 = orientation(b0, b1, a1);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a0, a1, b0)) return true;
    if (o2 == 0 && on_segment(a0, a1, b1)) return true;
    if (o3 == 0 && on_segment(b0, b1, a0)) return true;
    if (o4 == 0 && on_segment(b0, b1, a1)) return true;
    return false;
}

double distance_segment_segment(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
    if (segments_intersect(a0, a1, b0, b1)) return 0.0;
    double best = distance_point_segment(a0, b0, b1);
    best = std::min(best, distance_point_segment(a1, b0, b1));
    best = std::min(best, distance_point_segment(b0, a0, a1));
    best = std::min(best, distance_point_segment(b1, a0, a1));
    return best;
}

double ray_segment_intersection(const Vec2& origin, const Vec2& dir, const Vec2& a, const Vec2& b) {
    const Vec2 seg = b - a;
    const double denom = dir.cross(seg);
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    const Vec2 diff = a - origin;
    const double t = diff.cross(seg) / denom;
    const double s = diff.cross(dir) / denom;
    if (t >= 0.0 && s >= 0.0 && s <= 1.0) return t;
    return std::numeric_limits<double>::infinity();
}

double polygon_polygon_distance(const Polygon& a, const Polygon& b) {
    double best = std::numeric_limits<double>::infinity();
    const size_t na = a.size(), nb = b.size();
    for (size_t i = 0; i < na; ++i) {
        for (size_t j = 0; j < nb; ++j) {
            best = std::min(best, distance_segment_segment(a[i], a[(i + 1) % na], b[j], b[(j + 1) % nb]));
            if (best == 0.0) return 0.0;
        }
    }
    return best;
}

}  // namespace cfu
