#include "cfu/controller.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "cfu/rng.hpp"

namespace cfu {

double footprint_occupancy(const OccupancyGrid& costmap, const Vec2& p, double radius) {
    const GridGeometry& g = costmap.geom;
    double worst = costmap.occupancy_at(p);  // containing cell (or 1 outside)
    const auto [lo_x, lo_y] = g.cell_of({p.x - radius, p.y - radius});
    const auto [hi_x, hi_y] = g.cell_of({p.x + radius, p.y + radius});
    const double r_sq = radius * radius;
    for (int iy = lo_y; iy <= hi_y && worst < 1.0; ++iy) {
        for (int ix = lo_x; ix <= hi_x; ++ix) {
            const Vec2 c{g.origin.x + (ix + 0.5) * g.resolution, g.origin.y + (iy + 0.5) * g.resolution};
            if ((c - p).norm_sq() > r_sq) continue;
            const double v = g.in_bounds(ix, iy) ? costmap.at(ix, iy) : 1.0;
            if (v > worst) {
                worst = v;
                if (worst >= 1.0) break;
            }
        }
    }
    return worst;
}

CostBreakdown trajectory_cost_detail(const Trajectory& traj, const Vec2& goal, const OccupancyGrid& costmap,
                                     const CostParams& cp) {
    CostBreakdown out;
    const double tol_sq = cp.goal_tolerance * cp.goal_tolerance;
    for (size_t t = 0; t < traj.states.size(); ++t) {
        const State& s = traj.states[t];
        const double occ = footprint_occupancy(costmap, s.position(), cp.footprint_radius);
        if (occ > cp.o_thresh) {
            out.cost += cp.p_obs;
            out.collided = true;
            out.collision_index = static_cast<int>(t);
            return out;
        }
        const double d_sq = (s.position() - goal).norm_sq();
        if (d_sq <= tol_sq) {
            out.reached_goal = true;
            return out;
        }
        out.cost += cp.w_dist * d_sq + cp.occupancy_scale * occ;
    }
    const double d_term = (traj.states.back().position() - goal).norm_sq();
    out.cost += cp.w_term * d_term;
    return out;
}

std::vector<double> softmax_weights(const std::vector<double>& costs, double lambda) {
    std::vector<double> w(costs.size(), 0.0);
    if (costs.empty()) return w;
    const double min_cost = *std::min_element(costs.begin(), costs.end());
    double sum = 0.0;
    for (size_t k = 0; k < costs.size(); ++k) {
        w[k] = std::exp(-(costs[k] - min_cost) / lambda);
        sum += w[k];
    }
    for (double& x : w) x /= sum;
    return w;
}

std::vector<Control> mppi_update(const std::vector<Control>& nominal, const State& x, const Vec2& goal,
                                 const LocalPerception& map, const MppiParams& mp, const CostParams& cp,
                                 const PerturbationSpec& noise, const DynamicsParams& dyn, uint64_t seed) {
    const PerturbationBatch batch = sample_perturbations(nominal, noise, mp.k_mppi, dyn, seed);
    std::vector<double> costs(mp.k_mppi);
    for (int k = 0; k < mp.k_mppi; ++k)
        costs[k] = trajectory_cost(rollout(x, batch.sequences[k], dyn), goal, map.costmap, cp);
    const std::vector<double> w = softmax_weights(costs, mp.lambda);
    std::vector<Control> updated = nominal;
    for (int k = 0; k < mp.k_mppi; ++k)
        for (size_t t = 0; t < updated.size(); ++t) {
            updated[t].a += w[k] * batch.deltas[k][t].a;
            updated[t].delta += w[k] * batch.deltas[k][t].delta;
        }
    return updated;
}

const char* to_string(ControllerKind kind) {
    switch (kind) {
        case ControllerKind::Mppi: return "mppi";
        case ControllerKind::LogMppi: return "logmppi";
        case ControllerKind::CuMppi: return "cu-mppi";
        case ControllerKind::CfuMppi: return "cfu-mppi";
    }
    return "?";
}

std::optional<ControllerKind> controller_kind_from_string(const std::string& name) {
    if (name == "mppi") return ControllerKind::Mppi;
    if (name == "logmppi" || name == "log-mppi") return ControllerKind::LogMppi;
    if (name == "cu-mppi" || name == "cumppi") return ControllerKind::CuMppi;
    if (name == "cfu-mppi" || name == "cfumppi") return ControllerKind::CfuMppi;
    return std::nullopt;
}

Controller::Controller(ControllerConfig cfg) : cfg_(std::move(cfg)) {
    nominal_.assign(cfg_.disc.horizon, Control{});
}

void Controller::reset() {
    nominal_.assign(cfg_.disc.horizon, Control{});
    warm_ = false;
}

const FlowPolicy& Controller::cuniform_policy() {
    if (!cuniform_) cuniform_ = compute_cuniform_policy(cfg_.disc).policy;
    return *cuniform_;
}

ControllerOutput Controller::control_step(const State& x, const Vec2& goal, const LocalPerception& map,
                                          uint64_t seed) {
    const auto started = std::chrono::steady_clock::now();
    ControllerOutput out;

    if (warm_) {
        // shift-left warm start, repeating the last control
        std::rotate(nominal_.begin(), nominal_.begin() + 1, nominal_.end());
        nominal_.back() = nominal_[nominal_.size() - 1 >= 1 ? nominal_.size() - 2 : 0];
    }

    const bool hybrid = cfg_.kind == ControllerKind::CuMppi || cfg_.kind == ControllerKind::CfuMppi;
    bool init_done = false;

    if (hybrid) {
        const FlowPolicy* policy = nullptr;
        CfuPolicyResult cfu;
        if (cfg_.kind == ControllerKind::CfuMppi) {
            try {
                cfu = compute_cfu_policy(map, x.pose(), cfg_.disc, cfg_.cost.footprint_radius);
                policy = &cfu.policy;
            } catch (const NoSafeHorizonError&) {
                out.degraded_to_mppi = true;
            }
        } else {
            policy = &cuniform_policy();
        }

        if (policy) {
            const LocalPerception* query_map = cfg_.kind == ControllerKind::CfuMppi ? &map : nullptr;
            TrajectoryBatch batch =
                sample_policy_trajectories(*policy, x, x.v, cfg_.mppi.k_init, cfg_.disc.horizon, cfg_.dyn,
                                           substream(seed, 0), query_map);
            double best = std::numeric_limits<double>::infinity();
            int best_k = 0;
            for (int k = 0; k < static_cast<int>(batch.size()); ++k) {
                const CostBreakdown cb =
                    trajectory_cost_detail(batch.trajectories[k], goal, map.costmap, cfg_.cost);
                if (!cb.collided) ++out.collision_free_count;
                if (cb.cost < best) {
                    best = cb.cost;
                    best_k = k;
                }
            }
            nominal_ = batch.trajectories[best_k].controls;
            out.total_rollouts += cfg_.mppi.k_init;
            init_done = true;
        }
    }

    const PerturbationSpec noise =
        cfg_.kind == ControllerKind::LogMppi
            ? PerturbationSpec{NoiseKind::NormalLogNormal, cfg_.noise.sigma_a, cfg_.noise.sigma_delta,
                               cfg_.noise.sigma_ln}
            : cfg_.noise;

    for (int j = 0; j < cfg_.mppi.n_opt; ++j) {
        MppiParams mp = cfg_.mppi;
        // a degraded hybrid cycle folds the unused init budget into the first
        // refinement iteration to keep the per-step rollout budget equal
        if (hybrid && !init_done && j == 0) mp.k_mppi += cfg_.mppi.k_init;
        nominal_ = mppi_update(nominal_, x, goal, map, mp, cfg_.cost, noise, cfg_.dyn,
                               substream(seed, 1 + static_cast<uint64_t>(j)));
        out.total_rollouts += mp.k_mppi;
    }

    for (Control& u : nominal_) u = clamp_control(u, cfg_.dyn);
    warm_ = true;

    out.nominal = nominal_;
    out.planned = rollout(x, nominal_, cfg_.dyn);
    const CostBreakdown final_cb = trajectory_cost_detail(out.planned, goal, map.costmap, cfg_.cost);
    out.best_cost = final_cb.cost;
    out.u0 = nominal_.front();
    out.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return out;
}

}  // namespace cfu
