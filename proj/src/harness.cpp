#include "hardmdp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "hardmdp/simulate.hpp"
#include "hardmdp/util.hpp"

namespace hardmdp {

namespace {

constexpr std::uint64_t kLearnerStream = 0x4c524e;  // learner-private randomness
constexpr std::uint64_t kEnvStream = 0x454e56;

class UniformLearner : public Learner {
 public:
  void startRun(const Mdp& m, CounterRng rng) override {
    numActions_ = m.numActions;
    rng_ = rng;
  }
  int act(int, int) override { return rng_->nextBelow(numActions_); }
  void observe(int, int, int, double, int) override {}

 private:
  int numActions_ = 0;
  std::optional<CounterRng> rng_;
};

// Model-based optimistic planner: empirical kernel and reward plus a
// Hoeffding-shaped bonus b*H/sqrt(n), values clipped to the maximum
// remaining reward; replans before every episode.
class OptimisticQLearner : public Learner {
 public:
  explicit OptimisticQLearner(double bonusScale) : bonus_(bonusScale) {}

  void startRun(const Mdp& m, CounterRng) override {
    numStates_ = m.numStates;
    numActions_ = m.numActions;
    horizon_ = m.horizon;
    size_t cells = static_cast<size_t>(horizon_) * numStates_ * numActions_;
    visitCount_.assign(cells, 0);
    rewardSum_.assign(cells, 0.0);
    transitionCount_.assign(cells * numStates_, 0);
    qTable_.assign(cells, 0.0);
    vTable_.assign(static_cast<size_t>(horizon_) * numStates_, 0.0);
    plan();
  }

  void beginEpisode() override {
    if (dirty_) plan();
  }

  int act(int stage, int state) override {
    int best = 0;
    double bestQ = -1.0;
    for (int a = 0; a < numActions_; ++a) {
      double q = qTable_[cell(stage, state, a)];
      if (q > bestQ) {
        bestQ = q;
        best = a;
      }
    }
    return best;
  }

  void observe(int stage, int state, int action, double reward, int nextState) override {
    size_t c = cell(stage, state, action);
    visitCount_[c] += 1;
    rewardSum_[c] += reward;
    if (nextState >= 0) transitionCount_[c * numStates_ + nextState] += 1;
    dirty_ = true;
  }

 private:
  size_t cell(int h, int s, int a) const {
    return (static_cast<size_t>(h) * numStates_ + s) * numActions_ + a;
  }

  void plan() {
    for (int h = horizon_ - 1; h >= 0; --h) {
      double maxRemaining = horizon_ - h;
      for (int s = 0; s < numStates_; ++s) {
        double best = 0.0;
        for (int a = 0; a < numActions_; ++a) {
          size_t c = cell(h, s, a);
          double q;
          long n = visitCount_[c];
          if (n == 0) {
            q = maxRemaining;
          } else {
            q = rewardSum_[c] / n;
            if (h + 1 < horizon_) {
              double future = 0.0;
              for (int sn = 0; sn < numStates_; ++sn) {
                long cnt = transitionCount_[c * numStates_ + sn];
                if (cnt > 0) future += (static_cast<double>(cnt) / n) * vTable_[(h + 1) * numStates_ + sn];
              }
              q += future;
            }
            q += bonus_ * horizon_ / std::sqrt(static_cast<double>(n));
            q = std::min(q, maxRemaining);
          }
          qTable_[c] = q;
          best = std::max(best, q);
        }
        vTable_[static_cast<size_t>(h) * numStates_ + s] = best;
      }
    }
    dirty_ = false;
  }

  double bonus_;
  int numStates_ = 0, numActions_ = 0, horizon_ = 0;
  std::vector<long> visitCount_;
  std::vector<double> rewardSum_;
  std::vector<long> transitionCount_;
  std::vector<double> qTable_, vTable_;
  bool dirty_ = false;
};

}  // namespace

std::string LearnerSpec::name() const {
  switch (kind) {
    case Kind::Uniform: return "uniform";
    case Kind::OptimisticQ: return "optimistic-q";
    case Kind::BpiUniform: return "bpi-uniform";
  }
  throw std::logic_error("unreachable learner kind");
}

LearnerSpec LearnerSpec::fromName(const std::string& name) {
  for (Kind kind : {Kind::Uniform, Kind::OptimisticQ, Kind::BpiUniform}) {
    LearnerSpec spec{kind, 1.0};
    if (spec.name() == name) return spec;
  }
  throw std::invalid_argument("unknown learner: " + name);
}

std::unique_ptr<Learner> makeLearner(const LearnerSpec& spec) {
  if (spec.bonusScale <= 0.0) throw std::invalid_argument("learner hyperparameters must be positive");
  switch (spec.kind) {
    case LearnerSpec::Kind::Uniform: return std::make_unique<UniformLearner>();
    case LearnerSpec::Kind::OptimisticQ: return std::make_unique<OptimisticQLearner>(spec.bonusScale);
    case LearnerSpec::Kind::BpiUniform:
      throw std::invalid_argument("bpi-uniform is driven by runBpiSweep, not the episodic interface");
  }
  throw std::logic_error("unreachable learner kind");
}

std::vector<LearnerSpec> builtinLearners() {
  return {{LearnerSpec::Kind::Uniform, 1.0},
          {LearnerSpec::Kind::OptimisticQ, 1.0},
          {LearnerSpec::Kind::BpiUniform, 1.0}};
}

namespace {

struct RunCounts {
  double armVisits = 0.0;
  double totalReward = 0.0;
  std::vector<double> histogram;
};

// Runs one (instance, seed) cell for `episodes` episodes and counts visits
// to the tracked arm events. Asserts the leaf-window invariant: exactly one
// stage in the window occupies a decisive state.
RunCounts runCell(const HardInstance& inst, Learner& learner, long episodes,
                  std::uint64_t baseSeed, std::uint64_t instIdx, std::uint64_t seedIdx,
                  const std::map<std::tuple<int, int, int>, int>* histogramIndex) {
  RunCounts counts;
  if (histogramIndex) counts.histogram.assign(histogramIndex->size(), 0.0);
  learner.startRun(inst.mdp, CounterRng::substream(baseSeed, {kLearnerStream, instIdx, seedIdx}));
  for (long t = 0; t < episodes; ++t) {
    learner.beginEpisode();
    CounterRng envRng = CounterRng::substream(
        baseSeed, {kEnvStream, instIdx, seedIdx, static_cast<std::uint64_t>(t)});
    Trajectory traj = simulateEpisode(
        inst.mdp, [&](int h, int s, const Trajectory&) { return learner.act(h, s); }, envRng);
    for (int h = 0; h < inst.mdp.horizon; ++h) {
      int next = (h + 1 < inst.mdp.horizon) ? traj.states[h + 1] : -1;
      learner.observe(h, traj.states[h], traj.actions[h],
                      inst.mdp.reward(h, traj.states[h], traj.actions[h]), next);
    }
    learner.endEpisode();
    counts.totalReward += traj.totalReward;

    int windowHits = 0;
    for (int h1 = inst.windowFirstStage; h1 <= inst.windowLastStage; ++h1) {
      int s = traj.states[h1 - 1];
      if (!inst.decisiveState(s)) continue;
      ++windowHits;
      int a = traj.actions[h1 - 1];
      if (inst.armEvent && h1 == inst.armEvent->stage && s == inst.armEvent->state &&
          a == inst.armEvent->action)
        counts.armVisits += 1.0;
      if (histogramIndex) {
        auto it = histogramIndex->find({h1, s, a});
        if (it != histogramIndex->end()) counts.histogram[it->second] += 1.0;
      }
    }
    if (windowHits != 1)
      throw std::logic_error("hard-instance invariant violated: expected exactly one decisive visit per episode");
  }
  return counts;
}

std::map<std::tuple<int, int, int>, int> armEventIndex(const HardInstance& inst,
                                                       const std::vector<Arm>& arms) {
  std::map<std::tuple<int, int, int>, int> index;
  for (size_t i = 0; i < arms.size(); ++i) {
    ArmEvent e = inst.eventForArm(arms[i]);
    index[{e.stage, e.state, e.action}] = static_cast<int>(i);
  }
  return index;
}

double matchingRegretBound(const ClassSpec& spec, const HardInstance& reference, double T) {
  switch (spec.family) {
    case Family::Tree:
      return regretBound(TheoremId::RegretTree, spec.H, spec.S, spec.A, T).value;
    case Family::TreeStationary:
      return regretBound(TheoremId::RegretStationary, spec.H, spec.S, spec.A, T).value;
    case Family::S3Stationary:
      return regretBound(TheoremId::RegretS3, spec.H, 3, spec.A, T).value;
    case Family::S4Stage:
    case Family::S4Bpi:
      return regretBound(TheoremId::RegretS4, spec.H, 4, spec.A, T).value;
  }
  (void)reference;
  throw std::logic_error("unreachable family");
}

}  // namespace

SweepResult runRegretSweep(const LearnerFactory& factory, const LearnerSpec& label,
                           const ClassSpec& spec, long episodes, int seeds,
                           std::uint64_t baseSeed, int workers) {
  if (episodes < 1 || seeds < 1)
    throw std::invalid_argument("runRegretSweep: episodes and seeds must be positive");
  std::vector<HardInstanceParams> paramsList = enumerateClass(spec);
  std::vector<Arm> arms = classArms(spec);
  SweepResult result;
  result.spec = spec;
  result.learner = label;
  result.episodes = episodes;
  result.seeds = seeds;
  result.baseSeed = baseSeed;
  result.records.resize(paramsList.size());

  const long cells = static_cast<long>(paramsList.size()) * seeds;
  std::vector<RunCounts> cellCounts(cells);
  parallelFor(cells, workers, [&](long cell) {
    const long instIdx = cell / seeds;
    const long seedIdx = cell % seeds;
    HardInstance inst = buildInstance(paramsList[instIdx]);
    std::map<std::tuple<int, int, int>, int> histogram;
    const bool isReference = !paramsList[instIdx].arm.has_value();
    if (isReference) histogram = armEventIndex(inst, arms);
    auto learner = factory();
    cellCounts[cell] = runCell(inst, *learner, episodes, baseSeed,
                               static_cast<std::uint64_t>(instIdx),
                               static_cast<std::uint64_t>(seedIdx),
                               isReference ? &histogram : nullptr);
  });

  const double T = static_cast<double>(episodes);
  for (size_t i = 0; i < paramsList.size(); ++i) {
    SweepRecord& record = result.records[i];
    record.params = paramsList[i];
    HardInstance inst = buildInstance(paramsList[i]);
    record.rhoStar = optimalValues(inst.mdp).first.rho;
    const int d = inst.shape ? inst.shape->depth : 0;

    std::vector<double> identity(seeds), rewardBased(seeds), paired(seeds), visits(seeds);
    for (int seed = 0; seed < seeds; ++seed) {
      const RunCounts& counts = cellCounts[static_cast<long>(i) * seeds + seed];
      visits[seed] = counts.armVisits;
      identity[seed] = paramsList[i].arm
                           ? regretIdentity(spec.family, spec.H, spec.Hbar, d, spec.eps, T,
                                            counts.armVisits)
                           : 0.0;
      rewardBased[seed] = T * record.rhoStar - counts.totalReward;
      paired[seed] = identity[seed] - rewardBased[seed];
    }
    record.armVisitsPerSeed = visits;
    record.identityPerSeed = identity;
    record.rewardPerSeed = rewardBased;
    record.meanArmVisits = meanStderr(visits).mean;
    MeanStderr idStats = meanStderr(identity);
    record.meanIdentityRegret = idStats.mean;
    record.seIdentityRegret = idStats.se;
    MeanStderr rwStats = meanStderr(rewardBased);
    record.meanRewardRegret = rwStats.mean;
    record.seRewardRegret = rwStats.se;
    MeanStderr diffStats = meanStderr(paired);
    record.meanPairedDiff = diffStats.mean;
    record.sePairedDiff = diffStats.se;
    if (!paramsList[i].arm) {
      record.armHistogram.assign(arms.size(), 0.0);
      for (int seed = 0; seed < seeds; ++seed) {
        const RunCounts& counts = cellCounts[static_cast<long>(i) * seeds + seed];
        for (size_t k = 0; k < arms.size(); ++k) record.armHistogram[k] += counts.histogram[k];
      }
      for (double& value : record.armHistogram) value /= seeds;
    }
  }

  result.worstIndex = 0;
  result.worstRegret = result.records[0].meanIdentityRegret;
  for (size_t i = 1; i < result.records.size(); ++i)
    if (result.records[i].meanIdentityRegret > result.worstRegret) {
      result.worstRegret = result.records[i].meanIdentityRegret;
      result.worstIndex = static_cast<int>(i);
    }
  result.boundValue = matchingRegretBound(spec, buildInstance(paramsList[0]), T);
  result.ratio = result.boundValue > 0.0 ? result.worstRegret / result.boundValue : 0.0;
  return result;
}

SweepResult runRegretSweep(const LearnerSpec& learner, const ClassSpec& spec, long episodes,
                           int seeds, std::uint64_t baseSeed, int workers) {
  return runRegretSweep([&] { return makeLearner(learner); }, learner, spec, episodes, seeds,
                        baseSeed, workers);
}

std::pair<HardInstanceParams, double> adversarialInstance(const SweepResult& sweep) {
  const SweepRecord& worst = sweep.records[sweep.worstIndex];
  return {worst.params, worst.meanIdentityRegret};
}

std::pair<HardInstanceParams, double> adversarialInstance(const LearnerSpec& learner,
                                                          const ClassSpec& spec, long episodes,
                                                          int seeds, std::uint64_t baseSeed,
                                                          int workers) {
  return adversarialInstance(runRegretSweep(learner, spec, episodes, seeds, baseSeed, workers));
}

AveragingReport averagingInequalityCheck(const LearnerFactory& factory, const ClassSpec& spec,
                                         long episodes, int seeds, std::uint64_t baseSeed,
                                         int workers) {
  SweepResult sweep = runRegretSweep(factory, LearnerSpec{}, spec, episodes, seeds, baseSeed, workers);
  const std::vector<Arm> arms = classArms(spec);
  const double T = static_cast<double>(episodes);
  const double K = static_cast<double>(arms.size());

  AveragingReport report;
  report.rhs = 1.0 + std::sqrt(2.0) * spec.eps * std::sqrt(K * T);

  // Per-seed sum over arms of the own-instance visit count, divided by T.
  std::vector<double> lhsSamples(seeds, 0.0);
  for (size_t i = 1; i < sweep.records.size(); ++i)
    for (int seed = 0; seed < seeds; ++seed)
      lhsSamples[seed] += sweep.records[i].armVisitsPerSeed[seed] / T;
  MeanStderr lhsStats = meanStderr(lhsSamples);
  report.lhs = lhsStats.mean;
  report.lhsSe = lhsStats.se;
  report.holds = report.lhs <= report.rhs + 4.0 * report.lhsSe;

  // runCell throws if any episode misses the leaf window, so reaching this
  // point certifies the per-run identity sum(N_arm) = T.
  report.perRunSumExact = true;

  const SweepRecord& reference = sweep.records[0];
  for (size_t k = 0; k < arms.size(); ++k) {
    AveragingArmRow row;
    row.arm = arms[k];
    row.meanOwnVisits = sweep.records[k + 1].meanArmVisits;
    row.meanRefVisits = reference.armHistogram[k];
    row.chainBound = row.meanRefVisits / T + std::sqrt(2.0) * spec.eps * std::sqrt(row.meanRefVisits);
    double ownSe = meanStderr(sweep.records[k + 1].armVisitsPerSeed).se / T;
    row.holds = row.meanOwnVisits / T <= row.chainBound + 4.0 * ownSe + 1e-9;
    report.arms.push_back(row);
  }
  return report;
}

AveragingReport averagingInequalityCheck(const LearnerSpec& learner, const ClassSpec& spec,
                                         long episodes, int seeds, std::uint64_t baseSeed,
                                         int workers) {
  return averagingInequalityCheck([&] { return makeLearner(learner); }, spec, episodes, seeds,
                                  baseSeed, workers);
}

namespace {

struct BpiCellOutcome {
  double tau = 0.0;
  bool capped = false;
  double recommendedValue = 0.0;
  int armsOverHalf = 0;
};

BpiCellOutcome runBpiCell(const HardInstance& inst, const std::vector<MarkovPolicy>& armPolicies,
                          const std::vector<ArmEvent>& events, double delta, long episodeCap,
                          std::uint64_t baseSeed, std::uint64_t instIdx, std::uint64_t seedIdx) {
  const int K = static_cast<int>(armPolicies.size());
  if (episodeCap < K)
    throw std::invalid_argument("runBpiSweep: episode cap is below one round-robin pass");
  const int sGood = inst.stateNames.at("s_g");
  std::vector<double> wins(K, 0.0);
  std::vector<long> pulls(K, 0);
  long tau = 0;
  bool capped = true;
  int best = 0;

  auto radius = [&](long n) {
    return std::sqrt(std::log(2.0 * K * static_cast<double>(n) * (n + 1.0) / delta) / (2.0 * n));
  };

  while (tau + K <= episodeCap) {
    for (int k = 0; k < K; ++k) {
      CounterRng envRng = CounterRng::substream(
          baseSeed, {kEnvStream, instIdx, seedIdx, static_cast<std::uint64_t>(tau)});
      const MarkovPolicy& pol = armPolicies[k];
      Trajectory traj = simulateEpisode(
          inst.mdp,
          [&](int h, int s, const Trajectory&) {
            auto row = pol.row(h, s);
            for (int a = 0; a < inst.mdp.numActions; ++a)
              if (row[a] == 1.0) return a;
            return 0;
          },
          envRng);
      pulls[k] += 1;
      wins[k] += traj.states.back() == sGood ? 1.0 : 0.0;
      ++tau;
    }
    best = 0;
    for (int k = 1; k < K; ++k)
      if (wins[k] / pulls[k] > wins[best] / pulls[best]) best = k;
    bool separated = true;
    double bestLcb = wins[best] / pulls[best] - radius(pulls[best]);
    for (int k = 0; k < K && separated; ++k) {
      if (k == best) continue;
      separated = bestLcb >= wins[k] / pulls[k] + radius(pulls[k]);
    }
    if (separated) {
      capped = false;
      break;
    }
  }

  BpiCellOutcome outcome;
  outcome.tau = static_cast<double>(tau);
  outcome.capped = capped;
  const MarkovPolicy& recommended = armPolicies[best];
  outcome.recommendedValue = evaluatePolicy(inst.mdp, recommended).rho;
  OccupancyTable occ = occupancy(inst.mdp, recommended);
  for (const ArmEvent& e : events)
    if (occ.at(e.stage - 1, e.state, e.action) > 0.5) ++outcome.armsOverHalf;
  return outcome;
}

}  // namespace

BpiRunResult runBpiSweep(const LearnerSpec& learner, const ClassSpec& spec, double eps,
                         double delta, int seeds, std::uint64_t baseSeed, long episodeCap,
                         int workers) {
  if (learner.kind != LearnerSpec::Kind::BpiUniform)
    throw std::invalid_argument("runBpiSweep: only the bpi-uniform learner is supported");
  if (spec.family != Family::S4Bpi && spec.family != Family::Tree)
    throw std::invalid_argument("runBpiSweep: class family must be s4-bpi or tree");
  if (eps <= 0.0 || delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("runBpiSweep: need eps > 0 and delta in (0, 1)");

  std::vector<HardInstanceParams> paramsList = enumerateClass(spec);
  std::vector<Arm> arms = classArms(spec);

  BpiRunResult result;
  result.spec = spec;
  result.eps = eps;
  result.delta = delta;
  result.seeds = seeds;
  result.baseSeed = baseSeed;
  result.episodeCap = episodeCap;
  result.records.resize(paramsList.size());

  const long cells = static_cast<long>(paramsList.size()) * seeds;
  std::vector<BpiCellOutcome> outcomes(cells);
  parallelFor(cells, workers, [&](long cell) {
    const long instIdx = cell / seeds;
    const long seedIdx = cell % seeds;
    HardInstance inst = buildInstance(paramsList[instIdx]);
    std::vector<MarkovPolicy> armPolicies;
    std::vector<ArmEvent> events;
    armPolicies.reserve(arms.size());
    for (const Arm& arm : arms) {
      events.push_back(inst.eventForArm(arm));
      armPolicies.push_back(inst.armReachingPolicy(events.back()));
    }
    // The reference arm of the s4-bpi family is a recommendation candidate
    // too: it is the optimal arm of the reference MDP.
    if (spec.family == Family::S4Bpi) {
      events.insert(events.begin(), inst.eventForArm(*spec.refArm));
      armPolicies.insert(armPolicies.begin(), inst.armReachingPolicy(events.front()));
    }
    outcomes[cell] = runBpiCell(inst, armPolicies, events, delta, episodeCap, baseSeed,
                                static_cast<std::uint64_t>(instIdx),
                                static_cast<std::uint64_t>(seedIdx));
  });

  for (size_t i = 0; i < paramsList.size(); ++i) {
    BpiInstanceRecord& record = result.records[i];
    record.params = paramsList[i];
    HardInstance inst = buildInstance(paramsList[i]);
    record.rhoStar = optimalValues(inst.mdp).first.rho;
    std::vector<double> uncappedTaus;
    for (int seed = 0; seed < seeds; ++seed) {
      const BpiCellOutcome& outcome = outcomes[static_cast<long>(i) * seeds + seed];
      record.tauPerSeed.push_back(outcome.tau);
      record.cappedPerSeed.push_back(outcome.capped ? 1 : 0);
      if (outcome.capped)
        record.cappedRuns += 1;
      else
        uncappedTaus.push_back(outcome.tau);
      record.recommendedValues.push_back(outcome.recommendedValue);
      if (!(outcome.recommendedValue > record.rhoStar - eps)) record.failures += 1;
      record.maxArmsOverHalf = std::max(record.maxArmsOverHalf, outcome.armsOverHalf);
    }
    MeanStderr tauStats = meanStderr(uncappedTaus);
    record.meanTau = tauStats.mean;
    record.seTau = tauStats.se;
    record.failureRate = static_cast<double>(record.failures) / seeds;
  }

  result.referenceMeanTau = result.records[0].meanTau;
  if (spec.family == Family::S4Bpi)
    result.boundValue = bpiBound(TheoremId::BpiS4, spec.H, 4, spec.A, eps, delta).value;
  else
    result.boundValue = bpiBound(TheoremId::BpiTree, spec.H, spec.S, spec.A, eps, delta).value;
  return result;
}

}  // namespace hardmdp
