#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hardmdp/instances.hpp"

namespace hardmdp {

enum class TheoremId {
  RegretS3,
  RegretS4,
  RegretTree,
  RegretTreeRelaxed,
  RegretStationary,
  BpiS4,
  BpiTree,
  BpiTreeRelaxed,
  BpiStationary,
  PacTree,
  PacTreeRelaxed,
};

std::string theoremName(TheoremId id);
TheoremId theoremFromName(const std::string& name);
bool isRegretTheorem(TheoremId id);

struct PreCheck {
  std::string name;
  bool pass = false;
};

// Evaluated lower-bound constant. Failed preconditions never suppress the
// numeric value; the report carries both.
struct BoundReport {
  TheoremId theoremId = TheoremId::RegretTree;
  std::map<std::string, double> inputs;
  double value = 0.0;
  std::vector<PreCheck> preconditions;
  std::string formula;

  bool allPreconditionsPass() const;
};

BoundReport regretBound(TheoremId id, int H, int S, int A, double T);
BoundReport bpiBound(TheoremId id, int H, int S, int A, double eps, double delta);

struct OptimalEpsilon {
  double value = 0.0;
  bool feasible = false;  // value <= 1/4
};

// The epsilon maximizing the pre-optimization regret expression of each
// family: tree uses HbarLA arms, s3 uses A, s4 uses HA.
OptimalEpsilon optimalEpsilon(Family family, int H, int Hbar, int L, int A, double T);

// T * W * eps * (1 - E[N]/T) with the family's reward window W.
double regretIdentity(Family family, int H, int Hbar, int d, double eps, double T,
                      double expectedOptArmCount);

enum class TreeRegime { FullTree, RelaxedTree, ExponentialCap };

struct AssumptionReport {
  bool shapeValid = false;  // S >= 6 and A >= 2
  TreeRegime regime = TreeRegime::FullTree;
  int depth = 0;
  int leaves = 0;
  long long effectiveStates = 0;  // min(S, ceil(A^(H/3-2))) in the cap regime, else S
  bool horizonSufficient = false;  // H >= 3d for the reported depth
};

AssumptionReport assumptionCheck(int S, int A, int H);

}  // namespace hardmdp
