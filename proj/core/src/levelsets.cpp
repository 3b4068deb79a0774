#include "cfu/levelsets.hpp"

#include <cmath>

namespace cfu {

std::vector<double> uniform_action_set(int count, double delta_max) {
    if (count < 1) throw std::invalid_argument("uniform_action_set: count must be >= 1");
    std::vector<double> actions(count);
    if (count == 1) {
        actions[0] = 0.0;
        return actions;
    }
    for (int i = 0; i < count; ++i)
        actions[i] = -delta_max + 2.0 * delta_max * i / (count - 1);
    return actions;
}

GridCell discretize_state(const Pose& pose, const DiscretizationSpec& spec) {
    GridCell c;
    c.ix = static_cast<int>(std::floor(pose.x / spec.cell_xy));
    c.iy = static_cast<int>(std::floor(pose.y / spec.cell_xy));
    const double u = wrap_angle_2pi(pose.theta);
    c.itheta = std::min(spec.theta_bins - 1, static_cast<int>(std::floor(u / spec.cell_theta())));
    return c;
}

ReachabilityGraph build_reachability_graph(const LocalPerception* map, const Pose& x0_world,
                                           const DiscretizationSpec& spec, double footprint_radius) {
    if (spec.horizon < 1) throw std::invalid_argument("build_reachability_graph: horizon must be >= 1");
    if (spec.action_set.empty()) throw std::invalid_argument("build_reachability_graph: empty action set");
    if (map && footprint_in_collision(x0_world, map->sdf, footprint_radius))
        throw std::runtime_error("build_reachability_graph: start pose in collision");

    ReachabilityGraph g;
    g.spec = spec;
    g.frame = x0_world;
    g.levels.resize(spec.horizon + 1);
    g.edges.resize(spec.horizon);
    g.cell_index.resize(spec.horizon + 1);

    const Pose origin{0.0, 0.0, 0.0};
    g.levels[0].push_back({discretize_state(origin, spec), origin});
    g.cell_index[0].emplace(g.levels[0][0].cell, 0);

    // earliest-arrival owner level of each cell seen so far
    std::unordered_map<GridCell, int, GridCellHash> first_level;
    first_level.emplace(g.levels[0][0].cell, 0);

    const DynamicsParams rp = spec.reduced_params();
    DynamicsParams half = rp;
    half.dt = 0.5 * rp.dt;

    for (int t = 0; t < spec.horizon; ++t) {
        auto& next_level = g.levels[t + 1];
        auto& next_index = g.cell_index[t + 1];
        auto& level_edges = g.edges[t];
        // levels[t] does not grow during this pass; iterate by index anyway
        for (int i = 0; i < static_cast<int>(g.levels[t].size()); ++i) {
            const Pose rep = g.levels[t][i].rep;
            for (int a = 0; a < static_cast<int>(spec.action_set.size()); ++a) {
                const double delta = spec.action_set[a];
                const Pose succ = reduced_step(rep, delta, spec.v_nominal, rp);
                if (map) {
                    if (footprint_in_collision(frame_to_world(succ, g.frame), map->sdf, footprint_radius))
                        continue;
                    if (spec.check_segment_midpoint) {
                        const Pose mid = reduced_step(rep, delta, spec.v_nominal, half);
                        if (footprint_in_collision(frame_to_world(mid, g.frame), map->sdf, footprint_radius))
                            continue;
                    }
                }
                const GridCell cell = discretize_state(succ, spec);
                auto owner = first_level.find(cell);
                if (owner != first_level.end()) {
                    if (owner->second != t + 1) continue;  // earlier-arrival cell
                    level_edges.push_back({i, a, next_index.at(cell)});
                } else {
                    const int idx = static_cast<int>(next_level.size());
                    next_level.push_back({cell, succ});
                    next_index.emplace(cell, idx);
                    first_level.emplace(cell, t + 1);
                    level_edges.push_back({i, a, idx});
                }
            }
        }
    }
    return g;
}

PruneResult prune_inevitable_collisions(const ReachabilityGraph& g) {
    const int n = g.horizon();
    std::vector<std::vector<char>> alive(n + 1);
    for (int t = 0; t <= n; ++t) alive[t].assign(g.levels[t].size(), 1);

    // backward: a cell below the last level must keep at least one out-edge
    for (int t = n - 1; t >= 0; --t) {
        std::vector<char> has_out(g.levels[t].size(), 0);
        for (const LevelEdge& e : g.edges[t])
            if (alive[t + 1][e.to]) has_out[e.from] = 1;
        for (size_t i = 0; i < has_out.size(); ++i)
            if (!has_out[i]) alive[t][i] = 0;
    }
    if (g.levels[0].empty() || !alive[0][0]) throw NoSafeHorizonError();

    // forward: re-assert reachability from level 0
    for (int t = 1; t <= n; ++t) {
        std::vector<char> has_in(g.levels[t].size(), 0);
        for (const LevelEdge& e : g.edges[t - 1])
            if (alive[t - 1][e.from]) has_in[e.to] = 1;
        for (size_t i = 0; i < has_in.size(); ++i)
            if (!has_in[i]) alive[t][i] = 0;
    }

    // compact
    PruneResult out;
    out.graph.spec = g.spec;
    out.graph.frame = g.frame;
    out.graph.levels.resize(n + 1);
    out.graph.edges.resize(n);
    out.graph.cell_index.resize(n + 1);
    std::vector<std::vector<int>> remap(n + 1);
    for (int t = 0; t <= n; ++t) {
        remap[t].assign(g.levels[t].size(), -1);
        for (size_t i = 0; i < g.levels[t].size(); ++i) {
            if (!alive[t][i]) continue;
            remap[t][i] = static_cast<int>(out.graph.levels[t].size());
            out.graph.levels[t].push_back(g.levels[t][i]);
            out.graph.cell_index[t].emplace(g.levels[t][i].cell, remap[t][i]);
        }
    }
    for (int t = 0; t < n; ++t)
        for (const LevelEdge& e : g.edges[t])
            if (alive[t][e.from] && alive[t + 1][e.to])
                out.graph.edges[t].push_back({remap[t][e.from], e.action, remap[t + 1][e.to]});

    out.safe.levels = out.graph.levels;
    return out;
}

}  // namespace cfu
