#include "hardmdp/info_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hardmdp/rng.hpp"
#include "hardmdp/util.hpp"

namespace hardmdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBruteForceTermGuard = 1e7;

void requireUnit(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

double klBernoulli(double p, double q) {
  requireUnit(p, "p");
  requireUnit(q, "q");
  double total = 0.0;
  if (p > 0.0) {
    if (q == 0.0) return kInf;
    total += p * std::log(p / q);
  }
  if (p < 1.0) {
    if (q == 1.0) return kInf;
    total += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  }
  return total;
}

double klCategorical(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("klCategorical: length mismatch");
  double pSum = 0.0, qSum = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) throw std::invalid_argument("klCategorical: negative entry");
    pSum += p[i];
    qSum += q[i];
  }
  if (std::abs(pSum - 1.0) > kProbTolerance || std::abs(qSum - 1.0) > kProbTolerance)
    throw std::invalid_argument("klCategorical: inputs must be probability vectors");
  double total = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return kInf;
    total += p[i] * std::log(p[i] / q[i]);
  }
  return total;
}

PinskerResult pinskerCheck(double p, double q) {
  PinskerResult result;
  result.lhs = (p - q) * (p - q);
  result.rhs = 0.5 * klBernoulli(p, q);
  result.holds = result.lhs <= result.rhs;
  return result;
}

BoundPair klEpsilonBound(double eps) {
  if (eps < 0.0 || eps > 0.25)
    throw std::invalid_argument("klEpsilonBound: the bound is only claimed for eps in [0, 1/4]");
  return {klBernoulli(0.5, 0.5 + eps), 4.0 * eps * eps};
}

BoundPair klDeltaBound(double p, double q) {
  requireUnit(p, "p");
  requireUnit(q, "q");
  if (q == 1.0) throw std::invalid_argument("klDeltaBound: q must be strictly below 1");
  return {klBernoulli(p, q), (1.0 - p) * std::log(1.0 / (1.0 - q)) - std::log(2.0)};
}

namespace {

void requireSameFamily(const Mdp& m, const Mdp& m2) {
  if (!m.sameShape(m2)) throw std::invalid_argument("trajectory KL: MDP shapes differ");
  if (m.initialDist != m2.initialDist)
    throw std::invalid_argument("trajectory KL: initial distributions differ");
  if (m.rewards != m2.rewards)
    throw std::invalid_argument("trajectory KL: rewards differ; the MDPs must agree except on kernels");
}

bool rowsDiffer(std::span<const double> a, std::span<const double> b) {
  return !std::equal(a.begin(), a.end(), b.begin());
}

double fullTermCount(const Mdp& m, int T) {
  return std::pow(static_cast<double>(m.numStates) * m.numActions,
                  static_cast<double>(m.horizon - 1) * T) *
         std::pow(static_cast<double>(m.numStates), static_cast<double>(T));
}

void requireEnumerable(const Mdp& m, int T) {
  if (T < 1) throw std::invalid_argument("trajectory KL: T must be at least 1");
  if (fullTermCount(m, T) > kBruteForceTermGuard)
    throw std::invalid_argument("trajectory KL: instance too large to enumerate (guard 1e7 terms)");
}

struct EnumEpisode {
  Trajectory traj;       // H states, H-1 actions
  double probM = 0.0;    // full probability under (pol, m)
  double probM2 = 0.0;
  double logRatio = 0.0;  // kernel factors only; policy and mu cancel
  bool ratioInfinite = false;
};

// All episodes with positive probability under either MDP (shared policy).
std::vector<EnumEpisode> enumerateEpisodes(const Mdp& m, const Mdp& m2, const MarkovPolicy& pol) {
  std::vector<EnumEpisode> out;
  Trajectory traj;
  traj.states.assign(m.horizon, 0);
  traj.actions.assign(m.horizon - 1, 0);

  std::function<void(int, double, double, double, bool)> walk =
      [&](int h, double probM, double probM2, double logRatio, bool infinite) {
        if (h == m.horizon - 1) {
          EnumEpisode episode;
          episode.traj = traj;
          episode.traj.totalReward = 0.0;
          for (int i = 0; i + 1 < m.horizon; ++i)
            episode.traj.totalReward += m.reward(i, traj.states[i], traj.actions[i]);
          episode.probM = probM;
          episode.probM2 = probM2;
          episode.logRatio = logRatio;
          episode.ratioInfinite = infinite;
          out.push_back(std::move(episode));
          return;
        }
        int s = traj.states[h];
        for (int a = 0; a < m.numActions; ++a) {
          double pa = pol.row(h, s)[a];
          if (pa == 0.0) continue;
          auto row = m.kernelRow(h, s, a);
          auto row2 = m2.kernelRow(h, s, a);
          for (int sn = 0; sn < m.numStates; ++sn) {
            double p1 = row[sn], p2 = row2[sn];
            if (p1 == 0.0 && p2 == 0.0) continue;
            traj.actions[h] = a;
            traj.states[h + 1] = sn;
            double ratio = logRatio;
            bool inf = infinite;
            if (p1 > 0.0) {
              if (p2 == 0.0)
                inf = true;
              else
                ratio += std::log(p1 / p2);
            }
            walk(h + 1, probM * pa * p1, probM2 * pa * p2, ratio, inf);
          }
        }
      };

  for (int s0 = 0; s0 < m.numStates; ++s0) {
    if (m.initialDist[s0] == 0.0) continue;
    traj.states[0] = s0;
    walk(0, m.initialDist[s0], m.initialDist[s0], 0.0, false);
  }
  return out;
}

}  // namespace

KlBreakdown trajectoryKlExact(const Mdp& m, const Mdp& m2, const MarkovPolicy& pol, double T) {
  requireSameFamily(m, m2);
  if (!pol.matches(m)) throw std::invalid_argument("trajectory KL: policy dimensions mismatch");
  if (T < 0.0) throw std::invalid_argument("trajectory KL: T must be nonnegative");
  OccupancyTable occ = occupancy(m, pol);
  KlBreakdown breakdown;
  for (int h = 0; h + 1 < m.horizon; ++h)
    for (int s = 0; s < m.numStates; ++s)
      for (int a = 0; a < m.numActions; ++a) {
        auto row = m.kernelRow(h, s, a);
        auto row2 = m2.kernelRow(h, s, a);
        if (!rowsDiffer(row, row2)) continue;
        KlEntry entry;
        entry.stage = h + 1;
        entry.state = s;
        entry.action = a;
        entry.expectedCount = T * occ.at(h, s, a);
        // A differing row that is never visited contributes nothing, even
        // when it violates absolute continuity.
        if (entry.expectedCount == 0.0) continue;
        entry.rowKl = klCategorical(row, row2);
        breakdown.total += entry.expectedCount * entry.rowKl;
        breakdown.entries.push_back(entry);
      }
  return breakdown;
}

double trajectoryKlBruteForce(const Mdp& m, const Mdp& m2, const MarkovPolicy& pol, int T) {
  requireSameFamily(m, m2);
  if (!pol.matches(m)) throw std::invalid_argument("trajectory KL: policy dimensions mismatch");
  requireEnumerable(m, T);
  std::vector<EnumEpisode> episodes = enumerateEpisodes(m, m2, pol);
  const long long n = static_cast<long long>(episodes.size());
  long long tuples = 1;
  for (int t = 0; t < T; ++t) tuples *= n;
  double total = 0.0;
  std::vector<int> digits(T, 0);
  for (long long code = 0; code < tuples; ++code) {
    long long rest = code;
    for (int t = 0; t < T; ++t) {
      digits[t] = static_cast<int>(rest % n);
      rest /= n;
    }
    double prob = 1.0, ratio = 0.0;
    bool infinite = false;
    for (int t = 0; t < T && prob > 0.0; ++t) {
      const EnumEpisode& e = episodes[digits[t]];
      prob *= e.probM;
      ratio += e.logRatio;
      infinite = infinite || e.ratioInfinite;
    }
    if (prob == 0.0) continue;
    if (infinite) return kInf;
    total += prob * ratio;
  }
  return total;
}

McKlEstimate trajectoryKlMonteCarlo(const Mdp& m, const Mdp& m2, const RunDecideFn& decide,
                                    int T, int nReps, std::uint64_t seed, int workers) {
  requireSameFamily(m, m2);
  if (T < 1 || nReps < 1) throw std::invalid_argument("trajectoryKlMonteCarlo: T and nReps must be positive");
  std::vector<double> samples(nReps, 0.0);
  parallelFor(nReps, workers, [&](long rep) {
    std::vector<Trajectory> past;
    past.reserve(T);
    double ratioSum = 0.0;
    for (int t = 0; t < T; ++t) {
      CounterRng rng = CounterRng::substream(seed, {0x4d43u, static_cast<std::uint64_t>(rep),
                                                    static_cast<std::uint64_t>(t)});
      Trajectory traj = simulateEpisode(
          m,
          [&](int stage, int state, const Trajectory& soFar) {
            return decide(t, stage, state, past, soFar);
          },
          rng);
      for (int h = 0; h + 1 < m.horizon; ++h) {
        double p1 = m.kernelRow(h, traj.states[h], traj.actions[h])[traj.states[h + 1]];
        double p2 = m2.kernelRow(h, traj.states[h], traj.actions[h])[traj.states[h + 1]];
        if (p2 == 0.0)
          throw std::domain_error("trajectoryKlMonteCarlo: visited a row where the m2 kernel is zero");
        ratioSum += std::log(p1 / p2);
      }
      past.push_back(std::move(traj));
    }
    samples[rep] = ratioSum;
  });
  MeanStderr stats = meanStderr(samples);
  return {stats.mean, stats.se, stats.count};
}

ContractionResult klContractionCheck(const Mdp& m, const Mdp& m2, const MarkovPolicy& pol,
                                     int T, const RunFunctional& z) {
  requireSameFamily(m, m2);
  requireEnumerable(m, T);
  std::vector<EnumEpisode> episodes = enumerateEpisodes(m, m2, pol);
  const long long n = static_cast<long long>(episodes.size());
  long long tuples = 1;
  for (int t = 0; t < T; ++t) tuples *= n;
  double meanM = 0.0, meanM2 = 0.0;
  std::vector<int> digits(T, 0);
  std::vector<Trajectory> run(T);
  for (long long code = 0; code < tuples; ++code) {
    long long rest = code;
    for (int t = 0; t < T; ++t) {
      digits[t] = static_cast<int>(rest % n);
      rest /= n;
    }
    double probM = 1.0, probM2 = 1.0;
    for (int t = 0; t < T; ++t) {
      probM *= episodes[digits[t]].probM;
      probM2 *= episodes[digits[t]].probM2;
    }
    if (probM == 0.0 && probM2 == 0.0) continue;
    for (int t = 0; t < T; ++t) run[t] = episodes[digits[t]].traj;
    double value = z(run);
    if (value < -1e-12 || value > 1.0 + 1e-12)
      throw std::invalid_argument("klContractionCheck: Z must map into [0, 1]");
    value = std::clamp(value, 0.0, 1.0);
    meanM += probM * value;
    meanM2 += probM2 * value;
  }
  ContractionResult result;
  result.meanUnderM = std::clamp(meanM, 0.0, 1.0);
  result.meanUnderM2 = std::clamp(meanM2, 0.0, 1.0);
  result.klOfMeans = klBernoulli(result.meanUnderM, result.meanUnderM2);
  result.trajectoryKl = trajectoryKlExact(m, m2, pol, static_cast<double>(T)).total;
  result.holds = result.klOfMeans <= result.trajectoryKl + 1e-12;
  return result;
}

}  // namespace hardmdp
