#include "cfu/flowpolicy.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "cfu/rng.hpp"

namespace cfu {

MaxFlowSolver::MaxFlowSolver(int node_count)
    : adj_(node_count), level_(node_count), iter_(node_count) {}

int MaxFlowSolver::add_arc(int from, int to, int64_t capacity) {
    const int id = static_cast<int>(arcs_.size() / 2);
    adj_[from].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({to, capacity, capacity});
    adj_[to].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({from, 0, 0});
    return id;
}

bool MaxFlowSolver::bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<int> queue;
    queue.reserve(adj_.size());
    queue.push_back(s);
    level_[s] = 0;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        const int v = queue[qi];
        for (int arc : adj_[v]) {
            const InternalArc& e = arcs_[arc];
            if (e.residual > 0 && level_[e.to] < 0) {
                level_[e.to] = level_[v] + 1;
                queue.push_back(e.to);
            }
        }
    }
    return level_[t] >= 0;
}

int64_t MaxFlowSolver::dfs(int v, int t, int64_t limit) {
    if (v == t) return limit;
    for (size_t& i = iter_[v]; i < adj_[v].size(); ++i) {
        const int arc = adj_[v][i];
        InternalArc& e = arcs_[arc];
        if (e.residual > 0 && level_[e.to] == level_[v] + 1) {
            const int64_t pushed = dfs(e.to, t, std::min(limit, e.residual));
            if (pushed > 0) {
                e.residual -= pushed;
                arcs_[arc ^ 1].residual += pushed;
                return pushed;
            }
        }
    }
    level_[v] = -1;
    return 0;
}

int64_t MaxFlowSolver::solve(int source, int sink) {
    if (source == sink) throw std::invalid_argument("max flow: source == sink");
    int64_t flow = 0;
    while (bfs(source, sink)) {
        std::fill(iter_.begin(), iter_.end(), 0);
        while (int64_t pushed = dfs(source, sink, std::numeric_limits<int64_t>::max()))
            flow += pushed;
    }
    return flow;
}

std::vector<int64_t> FlowNetwork::target_masses() const {
    std::vector<int64_t> masses(sink_arcs.size(), 0);
    for (size_t i = 0; i < sink_arcs.size(); ++i) masses[i] = solver.flow_on(sink_arcs[i]);
    return masses;
}

FlowNetwork build_flow_network(const ReachabilityGraph& g, int level, const std::vector<int64_t>& masses) {
    if (level < 0 || level >= g.horizon())
        throw std::invalid_argument("build_flow_network: level out of range");
    const auto& src_cells = g.levels[level];
    const auto& dst_cells = g.levels[level + 1];
    if (src_cells.empty() || dst_cells.empty())
        throw std::runtime_error("build_flow_network: empty level");
    if (masses.size() != src_cells.size())
        throw std::invalid_argument("build_flow_network: mass count mismatch");

    FlowNetwork net;
    net.level = level;
    net.source = 0;
    net.sink = 1;
    const int node_count = 2 + static_cast<int>(src_cells.size() + dst_cells.size());
    net.solver = MaxFlowSolver(node_count);
    const auto src_node = [&](int i) { return 2 + i; };
    const auto dst_node = [&](int j) { return 2 + static_cast<int>(src_cells.size()) + j; };

    net.total_mass = 0;
    for (int64_t m : masses) net.total_mass += m;
    net.sink_capacity =
        (net.total_mass + static_cast<int64_t>(dst_cells.size()) - 1) / static_cast<int64_t>(dst_cells.size());

    net.source_arcs.reserve(src_cells.size());
    for (size_t i = 0; i < src_cells.size(); ++i)
        net.source_arcs.push_back(net.solver.add_arc(net.source, src_node(static_cast<int>(i)), masses[i]));

    net.edge_arcs.reserve(g.edges[level].size());
    for (const LevelEdge& e : g.edges[level]) {
        const int arc = net.solver.add_arc(src_node(e.from), dst_node(e.to), net.total_mass);
        net.edge_arcs.push_back({arc, e.from, e.action, e.to});
    }

    net.sink_arcs.reserve(dst_cells.size());
    for (size_t j = 0; j < dst_cells.size(); ++j)
        net.sink_arcs.push_back(net.solver.add_arc(dst_node(static_cast<int>(j)), net.sink, net.sink_capacity));

    return net;
}

int64_t max_flow(FlowNetwork& net) {
    net.flow_value = net.solver.solve(net.source, net.sink);
    return net.flow_value;
}

std::vector<FlowNetwork> solve_flow_chain(const ReachabilityGraph& g, int64_t unit) {
    const int n = g.horizon();
    std::vector<FlowNetwork> solved;
    solved.reserve(n);
    std::vector<int64_t> masses(g.levels[0].size(), 0);
    if (masses.empty()) throw std::runtime_error("solve_flow_chain: empty level 0");
    masses[0] = unit;
    for (int t = 0; t < n; ++t) {
        solved.push_back(build_flow_network(g, t, masses));
        max_flow(solved.back());
        masses = solved.back().target_masses();
    }
    return solved;
}

FlowPolicy extract_policy(const ReachabilityGraph& g, const std::vector<FlowNetwork>& solved) {
    if (static_cast<int>(solved.size()) != g.horizon())
        throw std::invalid_argument("extract_policy: need one solved network per level pair");
    const int action_count = static_cast<int>(g.spec.action_set.size());

    FlowPolicy policy;
    policy.spec = g.spec;
    policy.frame = g.frame;

    for (int t = 0; t < g.horizon(); ++t) {
        const FlowNetwork& net = solved[t];
        std::vector<std::vector<double>> flows(g.levels[t].size(), std::vector<double>());
        std::vector<double> outflow(g.levels[t].size(), 0.0);
        for (const FlowNetwork::EdgeArc& ea : net.edge_arcs) {
            auto& row = flows[ea.from];
            if (row.empty()) row.assign(action_count, 0.0);
            const double f = static_cast<double>(net.solver.flow_on(ea.arc));
            row[ea.action] += f;
            outflow[ea.from] += f;
        }
        // actions with surviving out-edges, for the zero-outflow fallback
        std::vector<std::vector<int>> out_actions(g.levels[t].size());
        for (const LevelEdge& e : g.edges[t]) out_actions[e.from].push_back(e.action);

        for (size_t i = 0; i < g.levels[t].size(); ++i) {
            ActionDistribution dist;
            dist.probs.assign(action_count, 0.0);
            if (outflow[i] > 0.0) {
                for (int a = 0; a < action_count; ++a) dist.probs[a] = flows[i][a] / outflow[i];
            } else {
                if (out_actions[i].empty()) continue;  // level-N cells carry no distribution
                dist.fallback = true;
                const double p = 1.0 / static_cast<double>(out_actions[i].size());
                for (int a : out_actions[i]) dist.probs[a] += p;
            }
            policy.entries.emplace(PolicyKey{t, g.levels[t][i].cell}, std::move(dist));
        }
    }

    for (int t = 0; t <= g.horizon(); ++t)
        for (const LevelEntry& entry : g.levels[t]) {
            auto& lv = policy.levels_of_cell[entry.cell];
            if (lv.empty() || lv.back() != t) lv.push_back(t);
        }
    return policy;
}

uint64_t hash_local_map(const LocalPerception& map) {
    uint64_t h = fnv1a("local-map");
    const auto mix = [&h](const void* data, size_t bytes) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < bytes; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    mix(&map.costmap.geom.origin, sizeof(Vec2));
    mix(&map.costmap.geom.resolution, sizeof(double));
    mix(map.costmap.values.data(), map.costmap.values.size() * sizeof(double));
    return h;
}

CfuPolicyResult compute_cfu_policy(const LocalPerception& map, const Pose& x0_world,
                                   const DiscretizationSpec& spec, double footprint_radius) {
    const ReachabilityGraph raw = build_reachability_graph(&map, x0_world, spec, footprint_radius);
    PruneResult pruned = prune_inevitable_collisions(raw);
    const std::vector<FlowNetwork> solved = solve_flow_chain(pruned.graph, kMassUnit);

    CfuPolicyResult out;
    out.policy = extract_policy(pruned.graph, solved);
    out.policy.footprint_radius = footprint_radius;
    out.policy.map_hash = hash_local_map(map);
    out.safe = std::move(pruned.safe);
    out.pruned_graph = std::move(pruned.graph);
    return out;
}

CfuPolicyResult compute_cuniform_policy(const DiscretizationSpec& spec) {
    const ReachabilityGraph raw = build_reachability_graph(nullptr, Pose{}, spec, 0.0);
    PruneResult pruned = prune_inevitable_collisions(raw);  // no-op on an open map
    const std::vector<FlowNetwork> solved = solve_flow_chain(pruned.graph, kMassUnit);

    CfuPolicyResult out;
    out.policy = extract_policy(pruned.graph, solved);
    out.policy.footprint_radius = 0.0;
    out.policy.map_hash = 0;
    out.safe = std::move(pruned.safe);
    out.pruned_graph = std::move(pruned.graph);
    return out;
}

}  // namespace cfu
