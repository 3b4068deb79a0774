#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfu/dynamics.hpp"
#include "cfu/env.hpp"
#include "cfu/flowpolicy.hpp"

namespace cfu {

enum class NoiseKind { Gaussian, NormalLogNormal };

struct PerturbationSpec {
    NoiseKind kind = NoiseKind::Gaussian;
    double sigma_a = 0.5;      // acceleration std-dev
    double sigma_delta = 0.1;  // steering std-dev
    double sigma_ln = 0.5;     // lognormal shape (NormalLogNormal only)
};

struct PerturbationBatch {
    std::vector<std::vector<Control>> deltas;     // raw noise, pre-clamp
    std::vector<std::vector<Control>> sequences;  // clamp(nominal + delta)
};

/// K perturbed control sequences around the nominal. Gaussian noise is
/// N(0, diag(sigma_a^2, sigma_delta^2)) i.i.d. per step; NormalLogNormal
/// multiplies each Gaussian draw by an independent mean-one lognormal
/// factor. Rollout k uses substream(seed, k), so batches are nested in K.
PerturbationBatch sample_perturbations(const std::vector<Control>& nominal, const PerturbationSpec& spec,
                                       int K, const DynamicsParams& p, uint64_t seed);

struct TrajectoryBatch {
    std::vector<Trajectory> trajectories;
    std::vector<int> first_collision;  // minimal colliding state index, -1 when collision-free

    size_t size() const { return trajectories.size(); }
    bool collided(size_t i) const { return first_collision[i] >= 0; }
};

/// Steering distribution for a world pose at level t: stored entry if the
/// discretized cell is populated at t, else the same cell at its smallest
/// populated level, else uniform over one-step collision-free actions (when
/// a map is available), else uniform over all actions.
ActionDistribution query_policy(const FlowPolicy& policy, const Pose& world_pose, int t,
                                const LocalPerception* map);

/// K policy-driven rollouts of the fixed-velocity reduced model from x0.
/// Controls record (a=0, delta). Collision flags are left unset; use
/// flag_collisions once a map is chosen.
TrajectoryBatch sample_policy_trajectories(const FlowPolicy& policy, const State& x0, double v, int K,
                                           int horizon, const DynamicsParams& p, uint64_t seed,
                                           const LocalPerception* map = nullptr);

/// MPPI-style batch: perturb the nominal, clamp, roll out the full model.
TrajectoryBatch sample_mppi_trajectories(const std::vector<Control>& nominal, const State& x0,
                                         const PerturbationSpec& spec, int K, const DynamicsParams& p,
                                         uint64_t seed);

void flag_collisions(TrajectoryBatch& batch, const LocalPerception& map, double footprint_radius);
void flag_collisions(TrajectoryBatch& batch, const PolygonEnvironment& env, double footprint_radius);

int sample_action_index(const ActionDistribution& dist, Rng& rng);

}  // namespace cfu
