#pragma once

#include <vector>

#include "cfu/geometry.hpp"

namespace cfu {

/// Kinematic single-track state: position, heading, forward velocity.
struct State {
    double px = 0.0;
    double py = 0.0;
    double theta = 0.0;
    double v = 0.0;

    Pose pose() const { return {px, py, theta}; }
    Vec2 position() const { return {px, py}; }
};

/// Acceleration + steering angle.
struct Control {
    double a = 0.0;
    double delta = 0.0;
};

struct DynamicsParams {
    double wheelbase = 0.33;  // 1/5-scale platform
    double dt = 0.2;
    double a_max = 3.0;
    double delta_max = 0.4;
    double v_min = 0.0;
    double v_max = 3.0;
};

struct Trajectory {
    std::vector<State> states;     // length T+1
    std::vector<Control> controls; // length T
};

inline Control clamp_control(const Control& u, const DynamicsParams& p) {
    return {std::clamp(u.a, -p.a_max, p.a_max), std::clamp(u.delta, -p.delta_max, p.delta_max)};
}

/// Forward-Euler step. Position and heading advance with the pre-update
/// velocity; velocity integrates the acceleration and is clamped last.
inline State step(const State& x, const Control& u, const DynamicsParams& p) {
    State n;
    n.px = x.px + x.v * std::cos(x.theta) * p.dt;
    n.py = x.py + x.v * std::sin(x.theta) * p.dt;
    n.theta = wrap_angle(x.theta + x.v / p.wheelbase * std::tan(u.delta) * p.dt);
    n.v = std::clamp(x.v + u.a * p.dt, p.v_min, p.v_max);
    return n;
}

/// Fixed-velocity reduced model: step at v = v_nominal, a = 0, projected to
/// the pose components.
inline Pose reduced_step(const Pose& pose, double delta, double v_nominal, const DynamicsParams& p) {
    const State next = step(State{pose.x, pose.y, pose.theta, v_nominal}, Control{0.0, delta}, p);
    return {next.px, next.py, next.theta};
}

Trajectory rollout(const State& x0, const std::vector<Control>& controls, const DynamicsParams& p);

}  // namespace cfu
