#include "cfu/samplers.hpp"

#include <algorithm>
#include <cmath>

#include "cfu/rng.hpp"

namespace cfu {

PerturbationBatch sample_perturbations(const std::vector<Control>& nominal, const PerturbationSpec& spec,
                                       int K, const DynamicsParams& p, uint64_t seed) {
    PerturbationBatch batch;
    batch.deltas.resize(K);
    batch.sequences.resize(K);
    const size_t T = nominal.size();
    for (int k = 0; k < K; ++k) {
        Rng rng(substream(seed, static_cast<uint64_t>(k)));
        std::normal_distribution<double> na(0.0, spec.sigma_a);
        std::normal_distribution<double> nd(0.0, spec.sigma_delta);
        // mean-one lognormal: E[exp(N(-s^2/2, s^2))] = 1
        std::lognormal_distribution<double> ln(-0.5 * spec.sigma_ln * spec.sigma_ln, spec.sigma_ln);
        auto& delta = batch.deltas[k];
        auto& seq = batch.sequences[k];
        delta.resize(T);
        seq.resize(T);
        for (size_t t = 0; t < T; ++t) {
            Control d{na(rng), nd(rng)};
            if (spec.kind == NoiseKind::NormalLogNormal) {
                d.a *= ln(rng);
                d.delta *= ln(rng);
            }
            delta[t] = d;
            seq[t] = clamp_control({nominal[t].a + d.a, nominal[t].delta + d.delta}, p);
        }
    }
    return batch;
}

ActionDistribution query_policy(const FlowPolicy& policy, const Pose& world_pose, int t,
                                const LocalPerception* map) {
    const Pose local = world_to_frame(world_pose, policy.frame);
    const GridCell cell = discretize_state(local, policy.spec);

    if (const ActionDistribution* d = policy.find(t, cell)) return *d;

    auto lv = policy.levels_of_cell.find(cell);
    if (lv != policy.levels_of_cell.end()) {
        for (int other : lv->second) {  // ascending: smallest level first
            if (const ActionDistribution* d = policy.find(other, cell)) return *d;
        }
    }

    const int n = static_cast<int>(policy.spec.action_set.size());
    ActionDistribution dist;
    dist.fallback = true;
    dist.probs.assign(n, 0.0);
    if (map) {
        const DynamicsParams rp = policy.spec.reduced_params();
        std::vector<int> safe;
        for (int a = 0; a < n; ++a) {
            const Pose succ = reduced_step(world_pose, policy.spec.action_set[a], policy.spec.v_nominal, rp);
            if (!footprint_in_collision(succ, map->sdf, policy.footprint_radius)) safe.push_back(a);
        }
        if (!safe.empty()) {
            const double p = 1.0 / static_cast<double>(safe.size());
            for (int a : safe) dist.probs[a] = p;
            return dist;
        }
    }
    std::fill(dist.probs.begin(), dist.probs.end(), 1.0 / n);
    return dist;
}

int sample_action_index(const ActionDistribution& dist, Rng& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double u = u01(rng);
    double acc = 0.0;
    const int n = static_cast<int>(dist.probs.size());
    for (int a = 0; a < n; ++a) {
        acc += dist.probs[a];
        if (u < acc) return a;
    }
    // numerical tail: return the last action with positive probability
    for (int a = n - 1; a >= 0; --a)
        if (dist.probs[a] > 0.0) return a;
    return n - 1;
}

TrajectoryBatch sample_policy_trajectories(const FlowPolicy& policy, const State& x0, double v, int K,
                                           int horizon, const DynamicsParams& p, uint64_t seed,
                                           const LocalPerception* map) {
    TrajectoryBatch batch;
    batch.trajectories.resize(K);
    batch.first_collision.assign(K, -1);
    for (int k = 0; k < K; ++k) {
        Rng rng(substream(seed, static_cast<uint64_t>(k)));
        Trajectory& traj = batch.trajectories[k];
        traj.states.reserve(horizon + 1);
        traj.controls.reserve(horizon);
        State s = x0;
        s.v = v;
        traj.states.push_back(s);
        Pose pose = s.pose();
        for (int t = 0; t < horizon; ++t) {
            const ActionDistribution dist = query_policy(policy, pose, t, map);
            const int a = sample_action_index(dist, rng);
            const double delta = policy.spec.action_set[a];
            pose = reduced_step(pose, delta, v, p);
            traj.controls.push_back({0.0, delta});
            traj.states.push_back({pose.x, pose.y, pose.theta, v});
        }
    }
    return batch;
}

TrajectoryBatch sample_mppi_trajectories(const std::vector<Control>& nominal, const State& x0,
                                         const PerturbationSpec& spec, int K, const DynamicsParams& p,
                                         uint64_t seed) {
    const PerturbationBatch perturbed = sample_perturbations(nominal, spec, K, p, seed);
    TrajectoryBatch batch;
    batch.trajectories.resize(K);
    batch.first_collision.assign(K, -1);
    for (int k = 0; k < K; ++k) batch.trajectories[k] = rollout(x0, perturbed.sequences[k], p);
    return batch;
}

namespace {

template <typename CollisionFn>
void flag_collisions_impl(TrajectoryBatch& batch, CollisionFn&& collides) {
    for (size_t i = 0; i < batch.trajectories.size(); ++i) {
        batch.first_collision[i] = -1;
        const auto& states = batch.trajectories[i].states;
        for (size_t t = 0; t < states.size(); ++t) {
            if (collides(states[t].pose())) {
                batch.first_collision[i] = static_cast<int>(t);
                break;
            }
        }
    }
}

}  // namespace

void flag_collisions(TrajectoryBatch& batch, const LocalPerception& map, double footprint_radius) {
    flag_collisions_impl(batch,
                         [&](const Pose& p) { return footprint_in_collision(p, map.sdf, footprint_radius); });
}

void flag_collisions(TrajectoryBatch& batch, const PolygonEnvironment& env, double footprint_radius) {
    flag_collisions_impl(batch,
                         [&](const Pose& p) { return footprint_hits_world(p, env, footprint_radius); });
}

}  // namespace cfu
