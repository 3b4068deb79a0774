#pragma once

#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cfu/dynamics.hpp"
#include "cfu/env.hpp"
#include "cfu/geometry.hpp"

namespace cfu {

/// Discretization of the reduced (x, y, theta) configuration space plus the
/// steering action set used for level-set expansion.
struct DiscretizationSpec {
    double cell_xy = 0.1;
    int theta_bins = 36;              // bins partition (-pi, pi]
    std::vector<double> action_set;   // steering angles, symmetric about 0
    int horizon = 6;                  // N steps
    double dt = 0.2;
    double v_nominal = 2.5;
    double wheelbase = 0.33;
    bool check_segment_midpoint = false;  // default: endpoint-only collision checks

    double cell_theta() const { return kTwoPi / theta_bins; }
    DynamicsParams reduced_params() const {
        DynamicsParams p;
        p.wheelbase = wheelbase;
        p.dt = dt;
        p.v_max = std::max(p.v_max, v_nominal);
        return p;
    }
};

/// `count` uniformly spaced steering angles over [-delta_max, delta_max].
std::vector<double> uniform_action_set(int count, double delta_max);

inline DiscretizationSpec default_discretization() {
    DiscretizationSpec spec;
    spec.action_set = uniform_action_set(21, 0.4);
    return spec;
}

struct GridCell {
    int ix = 0;
    int iy = 0;
    int itheta = 0;

    bool operator==(const GridCell&) const = default;
};

struct GridCellHash {
    size_t operator()(const GridCell& c) const {
        uint64_t h = 1469598103934665603ull;
        for (uint64_t v : {static_cast<uint64_t>(static_cast<uint32_t>(c.ix)),
                           static_cast<uint64_t>(static_cast<uint32_t>(c.iy)),
                           static_cast<uint64_t>(static_cast<uint32_t>(c.itheta))}) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

GridCell discretize_state(const Pose& pose, const DiscretizationSpec& spec);

/// One cell of a level set together with its first-arrival continuous pose
/// (poses are in the graph's canonical start frame).
struct LevelEntry {
    GridCell cell;
    Pose rep;
};

/// Edge from entry `from` of level t to entry `to` of level t+1 via action
/// index `action`.
struct LevelEdge {
    int from = 0;
    int action = 0;
    int to = 0;
};

/// Layered reachability DAG over discretized cells. All poses live in the
/// canonical frame where the start pose is the origin; `frame` holds the
/// world pose of that origin so collision checks and queries can convert.
struct ReachabilityGraph {
    DiscretizationSpec spec;
    Pose frame;
    std::vector<std::vector<LevelEntry>> levels;                                  // t = 0..N
    std::vector<std::vector<LevelEdge>> edges;                                    // edges[t]: t -> t+1
    std::vector<std::unordered_map<GridCell, int, GridCellHash>> cell_index;      // per level

    int horizon() const { return static_cast<int>(levels.size()) - 1; }
    size_t total_cells() const {
        size_t n = 0;
        for (const auto& l : levels) n += l.size();
        return n;
    }
};

struct SafeLevelSets {
    std::vector<std::vector<LevelEntry>> levels;
};

/// Thrown when pruning eliminates the start cell: no collision-free action
/// sequence of full horizon length exists.
struct NoSafeHorizonError : std::runtime_error {
    NoSafeHorizonError() : std::runtime_error("no safe horizon from start state") {}
};

/// Breadth-first layered expansion with earliest-arrival cell assignment.
/// Transitions whose successor pose collides are dropped; transitions into a
/// cell already owned by an earlier level are dropped. `map == nullptr`
/// builds the obstacle-free graph.
ReachabilityGraph build_reachability_graph(const LocalPerception* map, const Pose& x0_world,
                                           const DiscretizationSpec& spec, double footprint_radius);

struct PruneResult {
    ReachabilityGraph graph;   // compacted: only surviving cells and edges
    SafeLevelSets safe;
};

/// Removes inevitable-collision cells: backward sweep deleting cells with no
/// surviving out-edge, then a forward reachability sweep from level 0.
/// Throws NoSafeHorizonError when level 0 is eliminated.
PruneResult prune_inevitable_collisions(const ReachabilityGraph& g);

}  // namespace cfu
