#pragma once

#include <functional>
#include <vector>

#include "hardmdp/mdp.hpp"
#include "hardmdp/rng.hpp"

namespace hardmdp {

// One episode: states s_1..s_H and actions a_1..a_H. The stage-H action is
// recorded so rewards that depend on it are well defined, but it carries no
// transition and is excluded from the trajectory probability (the history
// convention ends at s_H).
struct Trajectory {
  std::vector<int> states;
  std::vector<int> actions;
  double totalReward = 0.0;
};

// Chooses the action at a (0-based) stage given the current state and the
// partial trajectory of the episode so far.
using DecideFn = std::function<int(int stage, int state, const Trajectory& soFar)>;

// Samples one trajectory under the MDP kernels with the callback's actions.
// Identical rng key and callback give a bit-identical trajectory. Throws
// std::out_of_range if the callback returns an invalid action.
Trajectory simulateEpisode(const Mdp& m, const DecideFn& decide, CounterRng rng);

// log of mu(s_1) * prod_{h<H} pi(a_h|s_h,h) p_h(s_{h+1}|s_h,a_h);
// -infinity when any factor is zero.
double trajectoryLogProb(const Mdp& m, const MarkovPolicy& pol, const Trajectory& traj);

DecideFn policyDecider(const MarkovPolicy& pol, CounterRng rng);

}  // namespace hardmdp
