#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace cfu {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Planar pose (position + heading).
struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    Vec2 position() const { return {x, y}; }
};

struct Rect {
    Vec2 min;
    Vec2 max;

    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
    bool contains(const Vec2& p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
    }
};

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a <= -kPi)
        a += kTwoPi;
    else if (a > kPi)
        a -= kTwoPi;
    return a;
}

/// Wraps an angle into [0, 2*pi).
inline double wrap_angle_2pi(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;  // fmod may return exactly 2*pi after rounding
    return a;
}

/// Expresses a world pose in the frame anchored at `frame` (frame origin
/// maps to x=y=theta=0).
inline Pose world_to_frame(const Pose& world, const Pose& frame) {
    const double c = std::cos(frame.theta), s = std::sin(frame.theta);
    const double dx = world.x - frame.x, dy = world.y - frame.y;
    return {c * dx + s * dy, -s * dx + c * dy, wrap_angle(world.theta - frame.theta)};
}

inline Pose frame_to_world(const Pose& local, const Pose& frame) {
    const double c = std::cos(frame.theta), s = std::sin(frame.theta);
    return {frame.x + c * local.x - s * local.y, frame.y + s * local.x + c * local.y,
            wrap_angle(local.theta + frame.theta)};
}

/// Simple polygon, vertices in counter-clockwise order.
using Polygon = std::vector<Vec2>;

double polygon_signed_area(const Polygon& poly);

/// Even-odd crossing test. Points exactly on the boundary may land on
/// either side; callers that care pair this with a distance query.
bool point_in_polygon(const Vec2& p, const Polygon& poly);

double distance_point_segment(const Vec2& p, const Vec2& a, const Vec2& b);

/// Minimum distance from p to the polygon boundary (always >= 0).
double distance_to_polygon_boundary(const Vec2& p, const Polygon& poly);

double distance_segment_segment(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);

bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);

/// Distance along ray origin + t*dir (dir unit) to segment [a,b].
/// Returns +inf when the ray misses the segment.
double ray_segment_intersection(const Vec2& origin, const Vec2& dir, const Vec2& a, const Vec2& b);

/// Minimum boundary-to-boundary distance between two polygons
/// (0 when they touch or overlap).
double polygon_polygon_distance(const Polygon& a, const Polygon& b);

}  // namespace cfu
