#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hardmdp {

// Stage convention: the math indexes stages 1..H; storage here is 0-based,
// so arrays indexed by stage run h = 0..H-1 and transition kernels exist
// for h = 0..H-2. Anything user-facing (instance parameters, reports)
// keeps the 1-based convention and converts at the boundary.

inline constexpr double kProbTolerance = 1e-9;

// Tabular episodic MDP with stage-indexed kernels and rewards.
// kernels[((h*S + s)*A + a)*S + s'] = p_h(s'|s,a) for h in 0..H-2.
// rewards[(h*S + s)*A + a] = r_h(s,a) in [0,1] for h in 0..H-1.
struct Mdp {
  int numStates = 0;
  int numActions = 0;
  int horizon = 0;
  std::vector<double> initialDist;
  std::vector<double> kernels;
  std::vector<double> rewards;

  static Mdp zeros(int numStates, int numActions, int horizon);

  std::span<const double> kernelRow(int h, int s, int a) const {
    return {kernels.data() + kernelOffset(h, s, a), static_cast<size_t>(numStates)};
  }
  std::span<double> kernelRow(int h, int s, int a) {
    return {kernels.data() + kernelOffset(h, s, a), static_cast<size_t>(numStates)};
  }
  double reward(int h, int s, int a) const { return rewards[(static_cast<size_t>(h) * numStates + s) * numActions + a]; }
  double& reward(int h, int s, int a) { return rewards[(static_cast<size_t>(h) * numStates + s) * numActions + a]; }

  bool sameShape(const Mdp& other) const {
    return numStates == other.numStates && numActions == other.numActions && horizon == other.horizon;
  }

 private:
  size_t kernelOffset(int h, int s, int a) const {
    return ((static_cast<size_t>(h) * numStates + s) * numActions + a) * numStates;
  }
};

// Markov policy pi(a|s,h); probs[(h*S + s)*A + a].
struct MarkovPolicy {
  int numStates = 0;
  int numActions = 0;
  int horizon = 0;
  std::vector<double> probs;

  static MarkovPolicy uniform(const Mdp& m);
  // Action table indexed [h][s].
  static MarkovPolicy deterministic(const Mdp& m, const std::vector<std::vector<int>>& actions);

  std::span<const double> row(int h, int s) const {
    return {probs.data() + (static_cast<size_t>(h) * numStates + s) * numActions, static_cast<size_t>(numActions)};
  }
  std::span<double> row(int h, int s) {
    return {probs.data() + (static_cast<size_t>(h) * numStates + s) * numActions, static_cast<size_t>(numActions)};
  }
  bool matches(const Mdp& m) const {
    return numStates == m.numStates && numActions == m.numActions && horizon == m.horizon;
  }
};

struct ValidationIssue {
  enum class Kind { KernelRowSum, NegativeKernelEntry, InitialDistSum, NegativeInitialEntry, RewardRange, BadSizes };
  Kind kind;
  int h = -1;  // 1-based stage where applicable
  int s = -1;
  int a = -1;
  double value = 0.0;
  std::string describe() const;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool valid() const { return issues.empty(); }
};

// V[h*S+s], Q[(h*S+s)*A+a], rho = sum_s mu(s) V[0][s].
struct ValueTable {
  int numStates = 0;
  int numActions = 0;
  int horizon = 0;
  std::vector<double> v;
  std::vector<double> q;
  double rho = 0.0;

  double valueAt(int h, int s) const { return v[static_cast<size_t>(h) * numStates + s]; }
  double qAt(int h, int s, int a) const { return q[(static_cast<size_t>(h) * numStates + s) * numActions + a]; }
};

// Stage-wise joint state-action distribution d_h(s,a); rows sum to 1 per stage.
struct OccupancyTable {
  int numStates = 0;
  int numActions = 0;
  int horizon = 0;
  std::vector<double> d;
  std::optional<double> episodeBudget;  // expected counts are budget * d

  double at(int h, int s, int a) const { return d[(static_cast<size_t>(h) * numStates + s) * numActions + a]; }
  double expectedCount(int h, int s, int a) const;
};

ValidationReport validate(const Mdp& m);

// Backward recursion Q_h = r_h + p_h V_{h+1} under the policy; exact up to
// floating rounding.
ValueTable evaluatePolicy(const Mdp& m, const MarkovPolicy& pol);

// Bellman-optimal values and the greedy deterministic policy, ties broken
// toward the lowest action index.
std::pair<ValueTable, MarkovPolicy> optimalValues(const Mdp& m);

OccupancyTable occupancy(const Mdp& m, const MarkovPolicy& pol,
                         std::optional<double> episodeBudget = std::nullopt);

}  // namespace hardmdp
