#include "hardmdp/simulate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hardmdp {

Trajectory simulateEpisode(const Mdp& m, const DecideFn& decide, CounterRng rng) {
  Trajectory traj;
  traj.states.reserve(m.horizon);
  traj.actions.reserve(m.horizon);
  int state = rng.sampleCategorical(m.initialDist);
  for (int h = 0; h < m.horizon; ++h) {
    traj.states.push_back(state);
    int action = decide(h, state, traj);
    if (action < 0 || action >= m.numActions)
      throw std::out_of_range("simulateEpisode: callback returned an out-of-range action");
    traj.actions.push_back(action);
    traj.totalReward += m.reward(h, state, action);
    if (h + 1 < m.horizon) state = rng.sampleCategorical(m.kernelRow(h, state, action));
  }
  return traj;
}

double trajectoryLogProb(const Mdp& m, const MarkovPolicy& pol, const Trajectory& traj) {
  if (static_cast<int>(traj.states.size()) != m.horizon ||
      static_cast<int>(traj.actions.size()) < m.horizon - 1)
    throw std::invalid_argument("trajectoryLogProb: trajectory length does not match the horizon");
  if (!pol.matches(m)) throw std::invalid_argument("trajectoryLogProb: policy dimensions mismatch");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double mu = m.initialDist[traj.states[0]];
  if (mu <= 0.0) return kNegInf;
  double logp = std::log(mu);
  for (int h = 0; h + 1 < m.horizon; ++h) {
    double pa = pol.row(h, traj.states[h])[traj.actions[h]];
    double pt = m.kernelRow(h, traj.states[h], traj.actions[h])[traj.states[h + 1]];
    if (pa <= 0.0 || pt <= 0.0) return kNegInf;
    logp += std::log(pa) + std::log(pt);
  }
  return logp;
}

DecideFn policyDecider(const MarkovPolicy& pol, CounterRng rng) {
  return [pol, rng](int stage, int state, const Trajectory&) mutable {
    return rng.sampleCategorical(pol.row(stage, state));
  };
}

}  // namespace hardmdp
