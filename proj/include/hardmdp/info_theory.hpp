#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hardmdp/mdp.hpp"
#include "hardmdp/simulate.hpp"

namespace hardmdp {

// All divergences are in nats.

double klBernoulli(double p, double q);
double klCategorical(std::span<const double> p, std::span<const double> q);

struct PinskerResult {
  double lhs = 0.0;  // (p - q)^2
  double rhs = 0.0;  // kl(p, q) / 2
  bool holds = false;
};
PinskerResult pinskerCheck(double p, double q);

struct BoundPair {
  double kl = 0.0;
  double bound = 0.0;
};
// {kl(1/2, 1/2+eps), 4 eps^2}; requires eps in [0, 1/4].
BoundPair klEpsilonBound(double eps);
// {kl(p, q), (1-p) log(1/(1-q)) - log 2}; requires q < 1.
BoundPair klDeltaBound(double p, double q);

struct KlEntry {
  int stage = 0;  // 1-based
  int state = 0;
  int action = 0;
  double expectedCount = 0.0;
  double rowKl = 0.0;  // +inf flags an absolute-continuity violation
};

struct KlBreakdown {
  double total = 0.0;
  // Rows where the kernels differ and the policy actually visits; total is
  // the sum of expectedCount * rowKl over the entries.
  std::vector<KlEntry> entries;
};

// KL(P_m, P_m2) over T-episode histories under a fixed Markov policy,
// as sum over differing rows of T * d_m(h,s,a) * KL(p_h, p'_h). The MDPs
// must share S, A, H, mu and r.
KlBreakdown trajectoryKlExact(const Mdp& m, const Mdp& m2, const MarkovPolicy& pol, double T);

// Same divergence by exhaustive enumeration of all T-episode histories.
// Guarded to at most 10^7 terms: (S*A)^((H-1)*T) * S^T.
double trajectoryKlBruteForce(const Mdp& m, const Mdp& m2, const MarkovPolicy& pol, int T);

// Chooses the action given the full run history (past episodes and the
// partial current one); supports history-dependent algorithms.
using RunDecideFn = std::function<int(int episode, int stage, int state,
                                      const std::vector<Trajectory>& past,
                                      const Trajectory& soFar)>;

struct McKlEstimate {
  double estimate = 0.0;
  double se = 0.0;
  long reps = 0;
};

// Sample mean over nReps runs of the per-run log-likelihood-ratio sum under
// m. The per-transition ratio terms form bounded martingale increments, so
// by optional stopping the estimator stays unbiased for the history KL even
// when T is replaced by an adaptive, almost-surely finite stopping rule;
// the exact route covers fixed T only. Throws std::domain_error if a
// visited row has a zero m2 entry.
McKlEstimate trajectoryKlMonteCarlo(const Mdp& m, const Mdp& m2, const RunDecideFn& decide,
                                    int T, int nReps, std::uint64_t seed, int workers = 1);

// [0,1]-valued functional of a T-episode run. Enumerated episodes carry
// H-1 actions (the history ends at s_H).
using RunFunctional = std::function<double(const std::vector<Trajectory>& run)>;

struct ContractionResult {
  double meanUnderM = 0.0;
  double meanUnderM2 = 0.0;
  double klOfMeans = 0.0;
  double trajectoryKl = 0.0;
  bool holds = false;
};

// Verifies kl(E_m[Z], E_m2[Z]) <= KL(P_m, P_m2) by enumeration; same guard
// as the brute-force route.
ContractionResult klContractionCheck(const Mdp& m, const Mdp& m2, const MarkovPolicy& pol,
                                     int T, const RunFunctional& z);

}  // namespace hardmdp
