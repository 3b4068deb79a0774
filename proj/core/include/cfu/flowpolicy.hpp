#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cfu/levelsets.hpp"

namespace cfu {

/// Dinic max-flow with int64 capacities. Adjacency keeps insertion order so
/// solutions (and the policies derived from them) are reproducible.
class MaxFlowSolver {
public:
    explicit MaxFlowSolver(int node_count);

    /// Returns an arc id usable with flow_on/capacity_of.
    int add_arc(int from, int to, int64_t capacity);

    int64_t solve(int source, int sink);

    int64_t flow_on(int arc) const { return arcs_[2 * arc].original - arcs_[2 * arc].residual; }
    int64_t capacity_of(int arc) const { return arcs_[2 * arc].original; }
    int node_count() const { return static_cast<int>(adj_.size()); }
    int arc_count() const { return static_cast<int>(arcs_.size() / 2); }
    int arc_from(int arc) const { return arcs_[2 * arc + 1].to; }
    int arc_to(int arc) const { return arcs_[2 * arc].to; }

private:
    struct InternalArc {
        int to;
        int64_t residual;
        int64_t original;
    };
    std::vector<InternalArc> arcs_;        // forward/backward interleaved
    std::vector<std::vector<int>> adj_;    // indices into arcs_
    std::vector<int> level_;
    std::vector<size_t> iter_;

    bool bfs(int s, int t);
    int64_t dfs(int v, int t, int64_t limit);
};

/// Flow network for one consecutive level pair t -> t+1: source arcs carry
/// each source cell's mass, graph edges unbounded, each target cell drains
/// to the sink with equal capacity ceil(total_mass / |L_{t+1}|).
struct FlowNetwork {
    int level = 0;          // t of the pair
    int source = 0;
    int sink = 1;
    MaxFlowSolver solver{2};
    std::vector<int> source_arcs;  // per source-cell index
    std::vector<int> sink_arcs;    // per target-cell index
    struct EdgeArc {
        int arc = 0;
        int from = 0;    // entry index in level t
        int action = 0;
        int to = 0;      // entry index in level t+1
    };
    std::vector<EdgeArc> edge_arcs;
    int64_t total_mass = 0;
    int64_t sink_capacity = 0;
    int64_t flow_value = 0;   // filled by max_flow

    /// Mass delivered to each cell of level t+1 (valid after max_flow).
    std::vector<int64_t> target_masses() const;
};

inline constexpr int64_t kMassUnit = 1'000'000;

FlowNetwork build_flow_network(const ReachabilityGraph& g, int level, const std::vector<int64_t>& masses);

/// Runs Dinic on the network; returns the flow value and records it.
int64_t max_flow(FlowNetwork& net);

/// Sequentially builds and solves the per-level-pair networks, feeding each
/// solution's target masses into the next pair. Level-0 mass is `unit` on
/// the single start cell.
std::vector<FlowNetwork> solve_flow_chain(const ReachabilityGraph& g, int64_t unit = kMassUnit);

struct ActionDistribution {
    std::vector<double> probs;   // indexed by action-set position, sums to 1
    bool fallback = false;       // true when not derived from positive outflow
};

struct PolicyKey {
    int t = 0;
    GridCell cell;

    bool operator==(const PolicyKey&) const = default;
};

struct PolicyKeyHash {
    size_t operator()(const PolicyKey& k) const {
        return GridCellHash{}(k.cell) * 1099511628211ull ^ static_cast<size_t>(k.t);
    }
};

/// Per-(level, cell) steering distribution extracted from the max-flow
/// solution. Poses/cells are in the canonical frame anchored at `frame`.
struct FlowPolicy {
    DiscretizationSpec spec;
    Pose frame;
    double footprint_radius = 0.3;
    uint64_t map_hash = 0;   // 0 for the obstacle-free policy
    std::unordered_map<PolicyKey, ActionDistribution, PolicyKeyHash> entries;
    std::unordered_map<GridCell, std::vector<int>, GridCellHash> levels_of_cell;  // ascending

    const ActionDistribution* find(int t, const GridCell& cell) const {
        auto it = entries.find({t, cell});
        return it == entries.end() ? nullptr : &it->second;
    }
};

/// Distributions per (t, cell): probability of an action is its edge flow
/// over the cell's total outflow; zero-outflow cells fall back to a uniform
/// distribution over their surviving out-edges.
FlowPolicy extract_policy(const ReachabilityGraph& g, const std::vector<FlowNetwork>& solved);

struct CfuPolicyResult {
    SafeLevelSets safe;
    FlowPolicy policy;
    ReachabilityGraph pruned_graph;
};

/// Full pipeline on a local map: reachability graph, inevitable-collision
/// pruning, per-pair max-flow, policy extraction. Throws NoSafeHorizonError
/// when no full-horizon collision-free path exists.
CfuPolicyResult compute_cfu_policy(const LocalPerception& map, const Pose& x0_world,
                                   const DiscretizationSpec& spec, double footprint_radius);

/// Obstacle-free variant (environment-agnostic, cacheable per spec).
CfuPolicyResult compute_cuniform_policy(const DiscretizationSpec& spec);

uint64_t hash_local_map(const LocalPerception& map);

}  // namespace cfu
