#include "hardmdp/mdp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hardmdp {

Mdp Mdp::zeros(int numStates, int numActions, int horizon) {
  if (numStates < 1 || numActions < 1 || horizon < 1)
    throw std::invalid_argument("Mdp::zeros: S, A, H must all be at least 1");
  Mdp m;
  m.numStates = numStates;
  m.numActions = numActions;
  m.horizon = horizon;
  m.initialDist.assign(numStates, 0.0);
  m.kernels.assign(static_cast<size_t>(horizon - 1) * numStates * numActions * numStates, 0.0);
  m.rewards.assign(static_cast<size_t>(horizon) * numStates * numActions, 0.0);
  return m;
}

MarkovPolicy MarkovPolicy::uniform(const Mdp& m) {
  MarkovPolicy pol;
  pol.numStates = m.numStates;
  pol.numActions = m.numActions;
  pol.horizon = m.horizon;
  pol.probs.assign(static_cast<size_t>(m.horizon) * m.numStates * m.numActions, 1.0 / m.numActions);
  return pol;
}

MarkovPolicy MarkovPolicy::deterministic(const Mdp& m, const std::vector<std::vector<int>>& actions) {
  if (static_cast<int>(actions.size()) != m.horizon)
    throw std::invalid_argument("deterministic policy: action table must have H rows");
  MarkovPolicy pol;
  pol.numStates = m.numStates;
  pol.numActions = m.numActions;
  pol.horizon = m.horizon;
  pol.probs.assign(static_cast<size_t>(m.horizon) * m.numStates * m.numActions, 0.0);
  for (int h = 0; h < m.horizon; ++h) {
    if (static_cast<int>(actions[h].size()) != m.numStates)
      throw std::invalid_argument("deterministic policy: action table must have S columns");
    for (int s = 0; s < m.numStates; ++s) {
      int a = actions[h][s];
      if (a < 0 || a >= m.numActions)
        throw std::invalid_argument("deterministic policy: action out of range");
      pol.row(h, s)[a] = 1.0;
    }
  }
  return pol;
}

std::string ValidationIssue::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::KernelRowSum:
      out << "kernel row (h=" << h << ", s=" << s << ", a=" << a << ") sums to " << value;
      break;
    case Kind::NegativeKernelEntry:
      out << "kernel row (h=" << h << ", s=" << s << ", a=" << a << ") has negative entry " << value;
      break;
    case Kind::InitialDistSum:
      out << "initial distribution sums to " << value;
      break;
    case Kind::NegativeInitialEntry:
      out << "initial distribution entry for s=" << s << " is negative (" << value << ")";
      break;
    case Kind::RewardRange:
      out << "reward (h=" << h << ", s=" << s << ", a=" << a << ") = " << value << " outside [0,1]";
      break;
    case Kind::BadSizes:
      out << "sizes must satisfy S >= 1, A >= 1, H >= 1";
      break;
  }
  return out.str();
}

ValidationReport validate(const Mdp& m) {
  ValidationReport report;
  if (m.numStates < 1 || m.numActions < 1 || m.horizon < 1) {
    report.issues.push_back({ValidationIssue::Kind::BadSizes, -1, -1, -1, 0.0});
    return report;
  }
  double muSum = 0.0;
  for (int s = 0; s < m.numStates; ++s) {
    muSum += m.initialDist[s];
    if (m.initialDist[s] < 0.0)
      report.issues.push_back({ValidationIssue::Kind::NegativeInitialEntry, -1, s, -1, m.initialDist[s]});
  }
  if (std::abs(muSum - 1.0) > kProbTolerance)
    report.issues.push_back({ValidationIssue::Kind::InitialDistSum, -1, -1, -1, muSum});
  for (int h = 0; h + 1 < m.horizon; ++h) {
    for (int s = 0; s < m.numStates; ++s) {
      for (int a = 0; a < m.numActions; ++a) {
        auto row = m.kernelRow(h, s, a);
        double sum = 0.0;
        for (int sn = 0; sn < m.numStates; ++sn) {
          sum += row[sn];
          if (row[sn] < 0.0)
            report.issues.push_back({ValidationIssue::Kind::NegativeKernelEntry, h + 1, s, a, row[sn]});
        }
        if (std::abs(sum - 1.0) > kProbTolerance)
          report.issues.push_back({ValidationIssue::Kind::KernelRowSum, h + 1, s, a, sum});
      }
    }
  }
  for (int h = 0; h < m.horizon; ++h)
    for (int s = 0; s < m.numStates; ++s)
      for (int a = 0; a < m.numActions; ++a) {
        double r = m.reward(h, s, a);
        if (r < 0.0 || r > 1.0)
          report.issues.push_back({ValidationIssue::Kind::RewardRange, h + 1, s, a, r});
      }
  return report;
}

namespace {

void requireMatch(const Mdp& m, const MarkovPolicy& pol) {
  if (!pol.matches(m)) throw std::invalid_argument("policy dimensions do not match the MDP");
}

}  // namespace

ValueTable evaluatePolicy(const Mdp& m, const MarkovPolicy& pol) {
  requireMatch(m, pol);
  ValueTable table;
  table.numStates = m.numStates;
  table.numActions = m.numActions;
  table.horizon = m.horizon;
  table.v.assign(static_cast<size_t>(m.horizon) * m.numStates, 0.0);
  table.q.assign(static_cast<size_t>(m.horizon) * m.numStates * m.numActions, 0.0);
  for (int h = m.horizon - 1; h >= 0; --h) {
    for (int s = 0; s < m.numStates; ++s) {
      double vs = 0.0;
      auto pi = pol.row(h, s);
      for (int a = 0; a < m.numActions; ++a) {
        double qa = m.reward(h, s, a);
        if (h + 1 < m.horizon) {
          auto row = m.kernelRow(h, s, a);
          for (int sn = 0; sn < m.numStates; ++sn)
            qa += row[sn] * table.valueAt(h + 1, sn);
        }
        table.q[(static_cast<size_t>(h) * m.numStates + s) * m.numActions + a] = qa;
        vs += pi[a] * qa;
      }
      table.v[static_cast<size_t>(h) * m.numStates + s] = vs;
    }
  }
  for (int s = 0; s < m.numStates; ++s) table.rho += m.initialDist[s] * table.valueAt(0, s);
  return table;
}

std::pair<ValueTable, MarkovPolicy> optimalValues(const Mdp& m) {
  ValueTable table;
  table.numStates = m.numStates;
  table.numActions = m.numActions;
  table.horizon = m.horizon;
  table.v.assign(static_cast<size_t>(m.horizon) * m.numStates, 0.0);
  table.q.assign(static_cast<size_t>(m.horizon) * m.numStates * m.numActions, 0.0);
  std::vector<std::vector<int>> greedy(m.horizon, std::vector<int>(m.numStates, 0));
  for (int h = m.horizon - 1; h >= 0; --h) {
    for (int s = 0; s < m.numStates; ++s) {
      double best = -1.0;
      int bestAction = 0;
      for (int a = 0; a < m.numActions; ++a) {
        double qa = m.reward(h, s, a);
        if (h + 1 < m.horizon) {
          auto row = m.kernelRow(h, s, a);
          for (int sn = 0; sn < m.numStates; ++sn)
            qa += row[sn] * table.valueAt(h + 1, sn);
        }
        table.q[(static_cast<size_t>(h) * m.numStates + s) * m.numActions + a] = qa;
        if (qa > best) {
          best = qa;
          bestAction = a;
        }
      }
      table.v[static_cast<size_t>(h) * m.numStates + s] = best;
      greedy[h][s] = bestAction;
    }
  }
  for (int s = 0; s < m.numStates; ++s) table.rho += m.initialDist[s] * table.valueAt(0, s);
  return {std::move(table), MarkovPolicy::deterministic(m, greedy)};
}

OccupancyTable occupancy(const Mdp& m, const MarkovPolicy& pol, std::optional<double> episodeBudget) {
  requireMatch(m, pol);
  OccupancyTable table;
  table.numStates = m.numStates;
  table.numActions = m.numActions;
  table.horizon = m.horizon;
  table.episodeBudget = episodeBudget;
  table.d.assign(static_cast<size_t>(m.horizon) * m.numStates * m.numActions, 0.0);
  std::vector<double> stateDist(m.initialDist.begin(), m.initialDist.end());
  std::vector<double> nextDist(m.numStates, 0.0);
  for (int h = 0; h < m.horizon; ++h) {
    for (int s = 0; s < m.numStates; ++s) {
      auto pi = pol.row(h, s);
      for (int a = 0; a < m.numActions; ++a)
        table.d[(static_cast<size_t>(h) * m.numStates + s) * m.numActions + a] = stateDist[s] * pi[a];
    }
    if (h + 1 < m.horizon) {
      std::fill(nextDist.begin(), nextDist.end(), 0.0);
      for (int s = 0; s < m.numStates; ++s) {
        if (stateDist[s] == 0.0) continue;
        auto pi = pol.row(h, s);
        for (int a = 0; a < m.numActions; ++a) {
          double mass = stateDist[s] * pi[a];
          if (mass == 0.0) continue;
          auto row = m.kernelRow(h, s, a);
          for (int sn = 0; sn < m.numStates; ++sn) nextDist[sn] += mass * row[sn];
        }
      }
      stateDist.swap(nextDist);
    }
  }
  return table;
}

double OccupancyTable::expectedCount(int h, int s, int a) const {
  if (!episodeBudget) throw std::logic_error("occupancy table was built without an episode budget");
  return *episodeBudget * at(h, s, a);
}

}  // namespace hardmdp
