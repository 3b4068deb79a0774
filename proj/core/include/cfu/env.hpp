#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfu/geometry.hpp"

namespace cfu {

/// World geometry: an axis-aligned boundary plus simple CCW obstacle polygons.
struct PolygonEnvironment {
    Rect bounds;
    std::vector<Polygon> obstacles;
};

/// Placement of a raster grid in the world. Cell (ix, iy) covers
/// [origin + ix*res, origin + (ix+1)*res) x [...]; values are stored
/// row-major with iy*width + ix.
struct GridGeometry {
    Vec2 origin;
    double resolution = 0.05;
    int width = 0;
    int height = 0;

    int index(int ix, int iy) const { return iy * width + ix; }
    bool in_bounds(int ix, int iy) const { return ix >= 0 && ix < width && iy >= 0 && iy < height; }
    Vec2 cell_center(int ix, int iy) const {
        return {origin.x + (ix + 0.5) * resolution, origin.y + (iy + 0.5) * resolution};
    }
    /// Cell containing a world point (may be out of bounds).
    std::pair<int, int> cell_of(const Vec2& p) const {
        return {static_cast<int>(std::floor((p.x - origin.x) / resolution)),
                static_cast<int>(std::floor((p.y - origin.y) / resolution))};
    }
    double half_diagonal() const {
        return 0.5 * std::hypot(width * resolution, height * resolution);
    }
};

struct OccupancyGrid {
    GridGeometry geom;
    std::vector<double> values;  // in [0, 1]

    double at(int ix, int iy) const { return values[geom.index(ix, iy)]; }
    double& at(int ix, int iy) { return values[geom.index(ix, iy)]; }
    /// Occupancy at a world point; out-of-grid reads as occupied.
    double occupancy_at(const Vec2& p) const;
};

struct SdfGrid {
    GridGeometry geom;
    std::vector<double> values;  // meters, negative inside obstacles

    double at(int ix, int iy) const { return values[geom.index(ix, iy)]; }
    double& at(int ix, int iy) { return values[geom.index(ix, iy)]; }
    /// Bilinear interpolation between cell centers; nullopt outside the
    /// interpolable interior.
    std::optional<double> sample(const Vec2& p) const;
};

struct LidarBeam {
    double bearing = 0.0;  // rad, relative to sensor heading
    double range = 0.0;    // m
};

struct LidarScan {
    Pose pose;
    std::vector<LidarBeam> beams;  // bearings strictly increasing over [0, 2pi)
    double max_range = 4.0;
};

/// Robot-centered costmap + SDF pair, world-axis aligned.
struct LocalPerception {
    OccupancyGrid costmap;
    SdfGrid sdf;
    Pose robot_pose_world;
};

/// Side length + resolution of a robot-centered local map.
struct LocalMapSpec {
    double side = 8.0;
    double resolution = 0.05;

    int cells() const { return static_cast<int>(std::lround(side / resolution)); }
};

struct GenerationSpec {
    Rect bounds{{0.0, 0.0}, {10.0, 10.0}};
    int min_obstacles = 8;
    int max_obstacles = 14;
    int min_vertices = 5;
    int max_vertices = 10;
    double min_radius = 0.25;   // star-polygon radial range
    double max_radius = 1.1;
    double min_clearance = 0.35;  // between obstacle boundaries
    double footprint_radius = 0.3;
    int max_obstacle_attempts = 400;
    int max_env_attempts = 25;
};

/// Distance to the nearest obstacle boundary, negative inside an obstacle.
/// With no obstacles returns kFreeSpaceSentinel.
double signed_distance(const PolygonEnvironment& env, const Vec2& p);

inline constexpr double kFreeSpaceSentinel = 1.0e9;

/// Like signed_distance but also treats the environment boundary as a wall:
/// negative outside bounds, and capped by the distance to the bounds edges.
double signed_clearance(const PolygonEnvironment& env, const Vec2& p);

/// Deterministic procedurally cluttered environment. Obstacles are
/// star-shaped (hence simple, usually concave) polygons placed by rejection
/// sampling with pairwise clearance; the result keeps at least one free disc
/// of radius 2x footprint. Throws std::runtime_error when the spec is too
/// dense to satisfy within the attempt caps.
PolygonEnvironment generate_cluttered_environment(uint64_t seed, const GenerationSpec& spec);

GridGeometry geometry_for_bounds(const Rect& bounds, double resolution);

/// Binary rasterization: 1 iff the cell center is inside an obstacle.
OccupancyGrid rasterize(const PolygonEnvironment& env, const GridGeometry& geom);

/// Per-cell signed_distance at centers; all-sentinel (half grid diagonal)
/// when there are no obstacles.
SdfGrid build_sdf_grid(const PolygonEnvironment& env, const GridGeometry& geom);

/// First hit along the ray against obstacle edges or the bounds rectangle,
/// clamped to max_range.
double cast_ray(const PolygonEnvironment& env, const Vec2& origin, double bearing, double max_range);

/// 360-degree scan with beam_count uniformly spaced bearings (relative to
/// pose.theta). Throws if the pose is inside an obstacle or out of bounds.
LidarScan simulate_lidar(const PolygonEnvironment& env, const Pose& pose, int beam_count, double max_range);

/// Builds the robot-centered costmap + SDF from a scan. Beam endpoints with
/// range < max_range mark occupied cells; cells traversed before a hit are
/// carved free and win over occupied marks; unobserved cells default to free.
LocalPerception scan_to_local_maps(const LidarScan& scan, const LocalMapSpec& spec);

/// Ground-truth local maps around a pose (oracle perception mode).
/// Occupancy and SDF come from the environment geometry directly, with the
/// world bounds treated as walls.
LocalPerception oracle_local_maps(const PolygonEnvironment& env, const Pose& pose, const LocalMapSpec& spec);

/// Uniform rejection-sampled collision-free poses (position clearance >=
/// footprint_radius from obstacles, footprint inside bounds). Deterministic
/// per seed; throws when the iteration cap is exhausted.
std::vector<Pose> sample_free_poses(const PolygonEnvironment& env, int count, double footprint_radius,
                                    uint64_t seed);

/// Exact signed Euclidean distance transform of an occupancy grid. Free
/// cells get +(distance to nearest occupied center - res/2), occupied cells
/// -(distance to nearest free center - res/2); the boundary sits halfway
/// between adjacent centers. No occupied cells -> all half-diagonal sentinel.
SdfGrid distance_transform(const OccupancyGrid& occ);

bool footprint_in_collision(const Pose& pose, const SdfGrid& sdf, double footprint_radius);
bool footprint_in_collision(const Pose& pose, const PolygonEnvironment& env, double footprint_radius);

/// Bounds-aware variant used for episode termination: hitting the world
/// boundary counts as a collision.
bool footprint_hits_world(const Pose& pose, const PolygonEnvironment& env, double footprint_radius);

}  // namespace cfu
