#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "hardmdp/bounds.hpp"
#include "hardmdp/instances.hpp"
#include "hardmdp/mdp.hpp"
#include "hardmdp/rng.hpp"

namespace hardmdp {

struct LearnerSpec {
  enum class Kind { Uniform, OptimisticQ, BpiUniform };
  Kind kind = Kind::Uniform;
  double bonusScale = 1.0;  // optimistic-q exploration bonus scale

  std::string name() const;
  static LearnerSpec fromName(const std::string& name);
};

// Episodic learner driven one action at a time; observations are fed back
// after each transition. One learner instance owns one (instance, seed) run.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual void startRun(const Mdp& m, CounterRng rng) = 0;
  virtual void beginEpisode() {}
  virtual int act(int stage, int state) = 0;
  // nextState is -1 for the final stage of an episode.
  virtual void observe(int stage, int state, int action, double reward, int nextState) = 0;
  virtual void endEpisode() {}
};

std::unique_ptr<Learner> makeLearner(const LearnerSpec& spec);
std::vector<LearnerSpec> builtinLearners();

// Plays a fixed Markov policy; used for arm-greedy baselines in tests.
class FixedPolicyLearner : public Learner {
 public:
  explicit FixedPolicyLearner(MarkovPolicy policy) : policy_(std::move(policy)) {}
  void startRun(const Mdp&, CounterRng rng) override { rng_ = rng; }
  int act(int stage, int state) override { return rng_->sampleCategorical(policy_.row(stage, state)); }
  void observe(int, int, int, double, int) override {}

 private:
  MarkovPolicy policy_;
  std::optional<CounterRng> rng_;
};

using LearnerFactory = std::function<std::unique_ptr<Learner>()>;

struct SweepRecord {
  HardInstanceParams params;
  double rhoStar = 0.0;
  double meanArmVisits = 0.0;  // mean over seeds of N
  std::vector<double> armVisitsPerSeed;
  std::vector<double> identityPerSeed;
  std::vector<double> rewardPerSeed;
  double meanIdentityRegret = 0.0;
  double seIdentityRegret = 0.0;
  double meanRewardRegret = 0.0;
  double seRewardRegret = 0.0;
  double meanPairedDiff = 0.0;  // identity minus reward, per-seed paired
  double sePairedDiff = 0.0;
  std::vector<double> armHistogram;  // reference MDP only: mean visits per class arm
};

struct SweepResult {
  ClassSpec spec;
  LearnerSpec learner;
  long episodes = 0;
  int seeds = 0;
  std::uint64_t baseSeed = 0;
  std::vector<SweepRecord> records;
  int worstIndex = 0;
  double worstRegret = 0.0;
  double boundValue = 0.0;  // matching regret theorem at these inputs
  double ratio = 0.0;       // worstRegret / boundValue
};

SweepResult runRegretSweep(const LearnerSpec& learner, const ClassSpec& spec, long episodes,
                           int seeds, std::uint64_t baseSeed, int workers = 1);
SweepResult runRegretSweep(const LearnerFactory& factory, const LearnerSpec& label,
                           const ClassSpec& spec, long episodes, int seeds,
                           std::uint64_t baseSeed, int workers = 1);

// Argmax record of the sweep; ties broken by enumeration (lexicographic)
// order.
std::pair<HardInstanceParams, double> adversarialInstance(const LearnerSpec& learner,
                                                          const ClassSpec& spec, long episodes,
                                                          int seeds, std::uint64_t baseSeed,
                                                          int workers = 1);
std::pair<HardInstanceParams, double> adversarialInstance(const SweepResult& sweep);

struct AveragingArmRow {
  Arm arm;
  double meanOwnVisits = 0.0;  // E_arm[N_arm] estimate
  double meanRefVisits = 0.0;  // E_0[N_arm] estimate
  double chainBound = 0.0;     // E_0[N]/T + sqrt(2) eps sqrt(E_0[N])
  bool holds = false;
};

struct AveragingReport {
  bool perRunSumExact = false;  // sum over arms of N equals T in every run
  double lhs = 0.0;             // (1/T) sum over arms of own-instance E[N]
  double lhsSe = 0.0;
  double rhs = 0.0;  // 1 + sqrt(2) eps sqrt(K T), K the arm count
  bool holds = false;
  std::vector<AveragingArmRow> arms;
};

AveragingReport averagingInequalityCheck(const LearnerSpec& learner, const ClassSpec& spec,
                                         long episodes, int seeds, std::uint64_t baseSeed,
                                         int workers = 1);
AveragingReport averagingInequalityCheck(const LearnerFactory& factory, const ClassSpec& spec,
                                         long episodes, int seeds, std::uint64_t baseSeed,
                                         int workers = 1);

struct BpiInstanceRecord {
  HardInstanceParams params;
  double rhoStar = 0.0;
  std::vector<double> tauPerSeed;
  std::vector<char> cappedPerSeed;
  std::vector<double> recommendedValues;  // exact rho of the recommendation
  long cappedRuns = 0;
  double meanTau = 0.0;  // over uncapped runs
  double seTau = 0.0;
  long failures = 0;  // rho <= rho* - eps
  double failureRate = 0.0;
  int maxArmsOverHalf = 0;  // arms whose visit probability exceeds 1/2 under a recommendation
};

struct BpiRunResult {
  ClassSpec spec;
  double eps = 0.0;
  double delta = 0.0;
  int seeds = 0;
  std::uint64_t baseSeed = 0;
  long episodeCap = 0;
  std::vector<BpiInstanceRecord> records;
  double referenceMeanTau = 0.0;
  double boundValue = 0.0;  // matching BPI theorem at these inputs
};

// Round-robin best-arm identification over the class's arm-reaching
// policies; stops on full confidence-interval separation at level delta and
// recommends the empirical best arm's deterministic policy.
BpiRunResult runBpiSweep(const LearnerSpec& learner, const ClassSpec& spec, double eps,
                         double delta, int seeds, std::uint64_t baseSeed,
                         long episodeCap = 1000000, int workers = 1);

}  // namespace hardmdp
