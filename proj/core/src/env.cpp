#include "cfu/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cfu/rng.hpp"

namespace cfu {

double OccupancyGrid::occupancy_at(const Vec2& p) const {
    auto [ix, iy] = geom.cell_of(p);
    if (!geom.in_bounds(ix, iy)) return 1.0;
    return at(ix, iy);
}

std::optional<double> SdfGrid::sample(const Vec2& p) const {
    const double u = (p.x - geom.origin.x) / geom.resolution - 0.5;
    const double v = (p.y - geom.origin.y) / geom.resolution - 0.5;
    const int ix = static_cast<int>(std::floor(u));
    const int iy = static_cast<int>(std::floor(v));
    if (ix < 0 || iy < 0 || ix + 1 >= geom.width || iy + 1 >= geom.height) return std::nullopt;
    const double fx = u - ix;
    const double fy = v - iy;
    const double v00 = at(ix, iy), v10 = at(ix + 1, iy);
    const double v01 = at(ix, iy + 1), v11 = at(ix + 1, iy + 1);
    return (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 + (1 - fx) * fy * v01 + fx * fy * v11;
}

double signed_distance(const PolygonEnvironment& env, const Vec2& p) {
    if (env.obstacles.empty()) return kFreeSpaceSentinel;
    double best = std::numeric_limits<double>::infinity();
    bool inside = false;
    for (const Polygon& poly : env.obstacles) {
        best = std::min(best, distance_to_polygon_boundary(p, poly));
        if (!inside && point_in_polygon(p, poly)) inside = true;
    }
    return inside ? -best : best;
}

namespace {

double rect_signed_clearance(const Rect& r, const Vec2& p) {
    // positive inside the rectangle, negative outside
    const double dx = std::min(p.x - r.min.x, r.max.x - p.x);
    const double dy = std::min(p.y - r.min.y, r.max.y - p.y);
    if (dx >= 0.0 && dy >= 0.0) return std::min(dx, dy);
    const double ox = std::min(dx, 0.0);
    const double oy = std::min(dy, 0.0);
    return -std::hypot(ox, oy);
}

}  // namespace

double signed_clearance(const PolygonEnvironment& env, const Vec2& p) {
    return std::min(signed_distance(env, p), rect_signed_clearance(env.bounds, p));
}

GridGeometry geometry_for_bounds(const Rect& bounds, double resolution) {
    GridGeometry g;
    g.origin = bounds.min;
    g.resolution = resolution;
    g.width = static_cast<int>(std::ceil(bounds.width() / resolution - 1e-9));
    g.height = static_cast<int>(std::ceil(bounds.height() / resolution - 1e-9));
    return g;
}

OccupancyGrid rasterize(const PolygonEnvironment& env, const GridGeometry& geom) {
    OccupancyGrid grid{geom, std::vector<double>(static_cast<size_t>(geom.width) * geom.height, 0.0)};
    for (int iy = 0; iy < geom.height; ++iy) {
        for (int ix = 0; ix < geom.width; ++ix) {
            const Vec2 c = geom.cell_center(ix, iy);
            for (const Polygon& poly : env.obstacles) {
                if (point_in_polygon(c, poly)) {
                    grid.at(ix, iy) = 1.0;
                    break;
                }
            }
        }
    }
    return grid;
}

SdfGrid build_sdf_grid(const PolygonEnvironment& env, const GridGeometry& geom) {
    SdfGrid grid{geom, std::vector<double>(static_cast<size_t>(geom.width) * geom.height, 0.0)};
    if (env.obstacles.empty()) {
        std::fill(grid.values.begin(), grid.values.end(), geom.half_diagonal());
        return grid;
    }
    for (int iy = 0; iy < geom.height; ++iy)
        for (int ix = 0; ix < geom.width; ++ix)
            grid.at(ix, iy) = signed_distance(env, geom.cell_center(ix, iy));
    return grid;
}

double cast_ray(const PolygonEnvironment& env, const Vec2& origin, double bearing, double max_range) {
    const Vec2 dir{std::cos(bearing), std::sin(bearing)};
    double t = std::numeric_limits<double>::infinity();
    for (const Polygon& poly : env.obstacles) {
        const size_t n = poly.size();
        for (size_t i = 0; i < n; ++i)
            t = std::min(t, ray_segment_intersection(origin, dir, poly[i], poly[(i + 1) % n]));
    }
    const Vec2 bl = env.bounds.min, tr = env.bounds.max;
    const Vec2 br{tr.x, bl.y}, tl{bl.x, tr.y};
    t = std::min(t, ray_segment_intersection(origin, dir, bl, br));
    t = std::min(t, ray_segment_intersection(origin, dir, br, tr));
    t = std::min(t, ray_segment_intersection(origin, dir, tr, tl));
    t = std::min(t, ray_segment_intersection(origin, dir, tl, bl));
    return std::min(t, max_range);
}

LidarScan simulate_lidar(const PolygonEnvironment& env, const Pose& pose, int beam_count, double max_range) {
    const Vec2 p = pose.position();
    if (!env.bounds.contains(p) || signed_distance(env, p) < 0.0)
        throw std::runtime_error("simulate_lidar: pose in collision");
    LidarScan scan;
    scan.pose = pose;
    scan.max_range = max_range;
    scan.beams.reserve(beam_count);
    for (int k = 0; k < beam_count; ++k) {
        const double bearing = kTwoPi * k / beam_count;
        scan.beams.push_back({bearing, cast_ray(env, p, pose.theta + bearing, max_range)});
    }
    return scan;
}

namespace {

// Amanatides & Woo voxel traversal from p0 to p1; emits in-grid cells in order.
void traverse_cells(const GridGeometry& g, const Vec2& p0, const Vec2& p1,
                    std::vector<std::pair<int, int>>& out) {
    out.clear();
    auto [ix, iy] = g.cell_of(p0);
    auto [ex, ey] = g.cell_of(p1);
    const Vec2 d = p1 - p0;
    const double len = d.norm();
    if (len == 0.0) {
        if (g.in_bounds(ix, iy)) out.emplace_back(ix, iy);
        return;
    }
    const int step_x = d.x > 0 ? 1 : (d.x < 0 ? -1 : 0);
    const int step_y = d.y > 0 ? 1 : (d.y < 0 ? -1 : 0);
    const double inf = std::numeric_limits<double>::infinity();
    const double t_dx = step_x != 0 ? g.resolution / std::abs(d.x) : inf;
    const double t_dy = step_y != 0 ? g.resolution / std::abs(d.y) : inf;
    double next_bx = g.origin.x + (ix + (step_x > 0 ? 1 : 0)) * g.resolution;
    double next_by = g.origin.y + (iy + (step_y > 0 ? 1 : 0)) * g.resolution;
    double t_max_x = step_x != 0 ? (next_bx - p0.x) / d.x : inf;
    double t_max_y = step_y != 0 ? (next_by - p0.y) / d.y : inf;

    const int cap = 4 * (g.width + g.height) + 8;
    for (int n = 0; n < cap; ++n) {
        if (g.in_bounds(ix, iy)) out.emplace_back(ix, iy);
        if (ix == ex && iy == ey) return;
        if (t_max_x > 1.0 && t_max_y > 1.0) return;  // endpoint inside current cell
        if (t_max_x < t_max_y) {
            ix += step_x;
            t_max_x += t_dx;
        } else {
            iy += step_y;
            t_max_y += t_dy;
        }
    }
}

// Felzenszwalb-Huttenlocher 1D squared distance transform.
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
            std::vector<double>& z, int n) {
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
        while (s <= z[k]) {
            --k;
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        d[q] = (q - v[k]) * (q - v[k]) + f[v[k]];
    }
}

// Squared distance (cell units) to nearest seed cell; kFar where unreachable.
constexpr double kFar = 1.0e12;

std::vector<double> edt_2d(const GridGeometry& g, const std::vector<char>& seed) {
    const int w = g.width, h = g.height;
    std::vector<double> dist(static_cast<size_t>(w) * h);
    std::vector<double> f(std::max(w, h)), d(std::max(w, h)), z(std::max(w, h) + 1);
    std::vector<int> v(std::max(w, h));
    // columns
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) f[y] = seed[static_cast<size_t>(y) * w + x] ? 0.0 : kFar;
        edt_1d(f, d, v, z, h);
        for (int y = 0; y < h; ++y) dist[static_cast<size_t>(y) * w + x] = d[y];
    }
    // rows
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) f[x] = dist[static_cast<size_t>(y) * w + x];
        edt_1d(f, d, v, z, w);
        for (int x = 0; x < w; ++x) dist[static_cast<size_t>(y) * w + x] = d[x];
    }
    return dist;
}

}  // namespace

SdfGrid distance_transform(const OccupancyGrid& occ) {
    const GridGeometry& g = occ.geom;
    const size_t n = occ.values.size();
    SdfGrid sdf{g, std::vector<double>(n, 0.0)};
    std::vector<char> occupied(n), free_cells(n);
    size_t occ_count = 0;
    for (size_t i = 0; i < n; ++i) {
        occupied[i] = occ.values[i] > 0.5;
        free_cells[i] = !occupied[i];
        occ_count += occupied[i];
    }
    const double sentinel = g.half_diagonal();
    if (occ_count == 0) {
        std::fill(sdf.values.begin(), sdf.values.end(), sentinel);
        return sdf;
    }
    if (occ_count == n) {
        std::fill(sdf.values.begin(), sdf.values.end(), -sentinel);
        return sdf;
    }
    const std::vector<double> d_occ = edt_2d(g, occupied);
    const std::vector<double> d_free = edt_2d(g, free_cells);
    const double res = g.resolution;
    for (size_t i = 0; i < n; ++i) {
        // the obstacle boundary sits halfway between adjacent free/occupied centers
        if (occupied[i])
            sdf.values[i] = -(std::sqrt(d_free[i]) * res - 0.5 * res);
        else
            sdf.values[i] = std::sqrt(d_occ[i]) * res - 0.5 * res;
    }
    return sdf;
}

LocalPerception scan_to_local_maps(const LidarScan& scan, const LocalMapSpec& spec) {
    const int cells = spec.cells();
    GridGeometry g;
    g.resolution = spec.resolution;
    g.width = g.height = cells;
    g.origin = {scan.pose.x - 0.5 * cells * spec.resolution, scan.pose.y - 0.5 * cells * spec.resolution};

    const size_t n = static_cast<size_t>(cells) * cells;
    std::vector<char> carved(n, 0), hit(n, 0);
    std::vector<std::pair<int, int>> path;
    const Vec2 origin = scan.pose.position();
    for (const LidarBeam& beam : scan.beams) {
        const double world_angle = scan.pose.theta + beam.bearing;
        const Vec2 end = origin + Vec2{std::cos(world_angle), std::sin(world_angle)} * beam.range;
        traverse_cells(g, origin, end, path);
        const bool beam_hit = beam.range < scan.max_range;
        if (path.empty()) continue;
        const auto [hx, hy] = g.cell_of(end);
        for (const auto& [cx, cy] : path) {
            if (beam_hit && cx == hx && cy == hy)
                hit[g.index(cx, cy)] = 1;
            else
                carved[g.index(cx, cy)] = 1;
        }
    }

    LocalPerception lp;
    lp.robot_pose_world = scan.pose;
    lp.costmap = OccupancyGrid{g, std::vector<double>(n, 0.0)};
    for (size_t i = 0; i < n; ++i)
        if (hit[i] && !carved[i]) lp.costmap.values[i] = 1.0;
    lp.sdf = distance_transform(lp.costmap);
    return lp;
}

LocalPerception oracle_local_maps(const PolygonEnvironment& env, const Pose& pose, const LocalMapSpec& spec) {
    const int cells = spec.cells();
    GridGeometry g;
    g.resolution = spec.resolution;
    g.width = g.height = cells;
    g.origin = {pose.x - 0.5 * cells * spec.resolution, pose.y - 0.5 * cells * spec.resolution};

    LocalPerception lp;
    lp.robot_pose_world = pose;
    lp.costmap = OccupancyGrid{g, std::vector<double>(static_cast<size_t>(cells) * cells, 0.0)};
    lp.sdf = SdfGrid{g, std::vector<double>(static_cast<size_t>(cells) * cells, 0.0)};
    for (int iy = 0; iy < cells; ++iy) {
        for (int ix = 0; ix < cells; ++ix) {
            const Vec2 c = g.cell_center(ix, iy);
            const double sd = signed_clearance(env, c);
            lp.sdf.at(ix, iy) = sd;
            lp.costmap.at(ix, iy) = sd <= 0.0 ? 1.0 : 0.0;
        }
    }
    return lp;
}

std::vector<Pose> sample_free_poses(const PolygonEnvironment& env, int count, double footprint_radius,
                                    uint64_t seed) {
    Rng rng(seed);
    const Rect& b = env.bounds;
    const double r = footprint_radius;
    if (b.width() <= 2 * r || b.height() <= 2 * r)
        throw std::runtime_error("sample_free_poses: bounds smaller than footprint");
    std::uniform_real_distribution<double> ux(b.min.x + r, b.max.x - r);
    std::uniform_real_distribution<double> uy(b.min.y + r, b.max.y - r);
    std::uniform_real_distribution<double> ut(0.0, kTwoPi);

    std::vector<Pose> poses;
    poses.reserve(count);
    const long cap = std::max(10000L, 2000L * count);
    for (long attempt = 0; attempt < cap && static_cast<int>(poses.size()) < count; ++attempt) {
        Pose p{ux(rng), uy(rng), ut(rng)};
        if (signed_distance(env, p.position()) >= r) poses.push_back(p);
    }
    if (static_cast<int>(poses.size()) < count)
        throw std::runtime_error("sample_free_poses: iteration cap exhausted, free space too small");
    return poses;
}

namespace {

Polygon random_star_polygon(Rng& rng, const GenerationSpec& spec) {
    std::uniform_int_distribution<int> nv_dist(spec.min_vertices, spec.max_vertices);
    const int nv = nv_dist(rng);
    std::uniform_real_distribution<double> rmax_dist(std::min(spec.min_radius + 0.05, spec.max_radius),
                                                     spec.max_radius);
    const double rmax = rmax_dist(rng);
    const Rect& b = spec.bounds;
    const double margin = rmax + 0.05;
    std::uniform_real_distribution<double> cx(b.min.x + margin, b.max.x - margin);
    std::uniform_real_distribution<double> cy(b.min.y + margin, b.max.y - margin);
    const Vec2 center{cx(rng), cy(rng)};

    std::uniform_real_distribution<double> jitter(0.08, 0.92);
    std::uniform_real_distribution<double> radius(spec.min_radius, rmax);
    Polygon poly;
    poly.reserve(nv);
    for (int i = 0; i < nv; ++i) {
        const double angle = (i + jitter(rng)) * kTwoPi / nv;
        const double r = radius(rng);
        poly.push_back(center + Vec2{std::cos(angle), std::sin(angle)} * r);
    }
    return poly;  // angles strictly increasing -> simple and CCW
}

bool placement_ok(const Polygon& poly, const std::vector<Polygon>& existing, double clearance) {
    for (const Polygon& q : existing) {
        if (polygon_polygon_distance(poly, q) < clearance) return false;
        if (point_in_polygon(poly[0], q) || point_in_polygon(q[0], poly)) return false;
    }
    return true;
}

bool has_free_disc(const PolygonEnvironment& env, double disc_radius) {
    const double step = std::max(disc_radius * 0.5, 0.05);
    for (double y = env.bounds.min.y; y <= env.bounds.max.y; y += step)
        for (double x = env.bounds.min.x; x <= env.bounds.max.x; x += step)
            if (signed_clearance(env, {x, y}) >= disc_radius) return true;
    return false;
}

}  // namespace

PolygonEnvironment generate_cluttered_environment(uint64_t seed, const GenerationSpec& spec) {
    if (spec.bounds.width() <= 2 * spec.max_radius || spec.bounds.height() <= 2 * spec.max_radius)
        throw std::invalid_argument("generate_cluttered_environment: bounds too small for max_radius");
    for (int env_attempt = 0; env_attempt < spec.max_env_attempts; ++env_attempt) {
        Rng rng(hash_combine(seed, static_cast<uint64_t>(env_attempt)));
        std::uniform_int_distribution<int> count_dist(spec.min_obstacles, spec.max_obstacles);
        const int target = count_dist(rng);

        PolygonEnvironment env;
        env.bounds = spec.bounds;
        bool all_placed = true;
        for (int i = 0; i < target; ++i) {
            bool placed = false;
            for (int attempt = 0; attempt < spec.max_obstacle_attempts; ++attempt) {
                Polygon poly = random_star_polygon(rng, spec);
                if (placement_ok(poly, env.obstacles, spec.min_clearance)) {
                    env.obstacles.push_back(std::move(poly));
                    placed = true;
                    break;
                }
            }
            if (!placed) {
                all_placed = false;
                break;
            }
        }
        if (!all_placed) continue;
        if (target == 0 || has_free_disc(env, 2.0 * spec.footprint_radius)) return env;
    }
    throw std::runtime_error("generate_cluttered_environment: could not satisfy spec (too dense)");
}

bool footprint_in_collision(const Pose& pose, const SdfGrid& sdf, double footprint_radius) {
    const auto v = sdf.sample(pose.position());
    if (!v) return true;  // outside the grid: conservative
    return *v < footprint_radius;
}

bool footprint_in_collision(const Pose& pose, const PolygonEnvironment& env, double footprint_radius) {
    return signed_distance(env, pose.position()) < footprint_radius;
}

bool footprint_hits_world(const Pose& pose, const PolygonEnvironment& env, double footprint_radius) {
    return signed_clearance(env, pose.position()) < footprint_radius;
}

}  // namespace cfu
