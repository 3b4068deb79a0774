#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfu/samplers.hpp"

namespace cfu {

struct CostParams {
    double w_dist = 1.0;
    double w_term = 10.0;
    double o_thresh = 0.9;         // footprint occupancy above this is a collision
    double p_obs = 1.0e6;
    double occupancy_scale = 5.0;  // clearance-shaping weight below the threshold
    double goal_tolerance = 0.3;
    double footprint_radius = 0.3;
};

/// Maximum costmap occupancy over cells whose center lies within `radius` of
/// p (the containing cell always counts); out-of-map area reads as 1.
double footprint_occupancy(const OccupancyGrid& costmap, const Vec2& p, double radius);

struct CostBreakdown {
    double cost = 0.0;
    bool collided = false;
    int collision_index = -1;
    bool reached_goal = false;
};

/// Accumulated squared-distance + occupancy cost with early exit: stops at
/// the first collision (penalty retained, rest zeroed) or the first state
/// inside the goal tolerance (rest zeroed, terminal included in the zeroing).
CostBreakdown trajectory_cost_detail(const Trajectory& traj, const Vec2& goal, const OccupancyGrid& costmap,
                                     const CostParams& cp);

inline double trajectory_cost(const Trajectory& traj, const Vec2& goal, const OccupancyGrid& costmap,
                              const CostParams& cp) {
    return trajectory_cost_detail(traj, goal, costmap, cp).cost;
}

struct MppiParams {
    int k_mppi = 256;    // samples per refinement iteration
    double lambda = 0.5;
    int n_opt = 1;       // refinement iterations per control step
    int k_init = 256;    // hybrid initialization budget
};

/// Softmax of -cost/lambda, shifted by the minimum cost before
/// exponentiation. Weights are non-negative and sum to 1.
std::vector<double> softmax_weights(const std::vector<double>& costs, double lambda);

/// One MPPI iteration: perturb, clamp, roll out the full model, cost,
/// exponentially weight, and shift the nominal by the weighted raw noise.
std::vector<Control> mppi_update(const std::vector<Control>& nominal, const State& x, const Vec2& goal,
                                 const LocalPerception& map, const MppiParams& mp, const CostParams& cp,
                                 const PerturbationSpec& noise, const DynamicsParams& dyn, uint64_t seed);

enum class ControllerKind { Mppi, LogMppi, CuMppi, CfuMppi };

const char* to_string(ControllerKind kind);
std::optional<ControllerKind> controller_kind_from_string(const std::string& name);

struct ControllerConfig {
    ControllerKind kind = ControllerKind::Mppi;
    MppiParams mppi;
    CostParams cost;
    PerturbationSpec noise;
    DiscretizationSpec disc;
    DynamicsParams dyn;
};

struct ControllerOutput {
    Control u0;
    std::vector<Control> nominal;   // clamped, post-update
    Trajectory planned;             // rollout of the final nominal
    double best_cost = 0.0;
    int collision_free_count = 0;   // over every rollout costed this step
    int total_rollouts = 0;
    bool degraded_to_mppi = false;  // cfu found no safe horizon this cycle
    double wall_time_ms = 0.0;
};

/// Receding-horizon controller: pure MPPI / Log-MPPI, or the hybrid variants
/// that seed the nominal from the best of K_init policy rollouts before MPPI
/// refinement. Keeps the warm-started nominal between cycles. Not safe for
/// concurrent control_step calls on one instance.
class Controller {
public:
    explicit Controller(ControllerConfig cfg);

    ControllerOutput control_step(const State& x, const Vec2& goal, const LocalPerception& map,
                                  uint64_t seed);

    void reset();
    const ControllerConfig& config() const { return cfg_; }

private:
    ControllerConfig cfg_;
    std::vector<Control> nominal_;
    bool warm_ = false;
    std::optional<FlowPolicy> cuniform_;  // lazily built obstacle-free policy

    const FlowPolicy& cuniform_policy();
};

}  // namespace cfu
