#include "cfu/dynamics.hpp"

namespace cfu {

Trajectory rollout(const State& x0, const std::vector<Control>& controls, const DynamicsParams& p) {
    Trajectory traj;
    traj.states.reserve(controls.size() + 1);
    traj.controls = controls;
    traj.states.push_back(x0);
    for (const Control& u : controls) traj.states.push_back(step(traj.states.back(), u, p));
    return traj;
}

}  // namespace cfu
