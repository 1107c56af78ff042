#include "hardmdp/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace hardmdp {

namespace {

double capTerm(int A, int H) { return std::pow(static_cast<double>(A), H / 3.0 - 2.0); }

long long ceilCapStates(int A, int H) {
  return std::max(1LL, static_cast<long long>(std::ceil(capTerm(A, H))));
}

}  // namespace

std::string theoremName(TheoremId id) {
  switch (id) {
    case TheoremId::RegretS3: return "regret-s3";
    case TheoremId::RegretS4: return "regret-s4";
    case TheoremId::RegretTree: return "regret-tree";
    case TheoremId::RegretTreeRelaxed: return "regret-tree-relaxed";
    case TheoremId::RegretStationary: return "regret-stationary";
    case TheoremId::BpiS4: return "bpi-s4";
    case TheoremId::BpiTree: return "bpi-tree";
    case TheoremId::BpiTreeRelaxed: return "bpi-tree-relaxed";
    case TheoremId::BpiStationary: return "bpi-stationary";
    case TheoremId::PacTree: return "pac-tree";
    case TheoremId::PacTreeRelaxed: return "pac-tree-relaxed";
  }
  throw std::logic_error("unreachable theorem id");
}

TheoremId theoremFromName(const std::string& name) {
  for (TheoremId id : {TheoremId::RegretS3, TheoremId::RegretS4, TheoremId::RegretTree,
                       TheoremId::RegretTreeRelaxed, TheoremId::RegretStationary, TheoremId::BpiS4,
                       TheoremId::BpiTree, TheoremId::BpiTreeRelaxed, TheoremId::BpiStationary,
                       TheoremId::PacTree, TheoremId::PacTreeRelaxed})
    if (theoremName(id) == name) return id;
  throw std::invalid_argument("unknown theorem id: " + name);
}

bool isRegretTheorem(TheoremId id) {
  switch (id) {
    case TheoremId::RegretS3:
    case TheoremId::RegretS4:
    case TheoremId::RegretTree:
    case TheoremId::RegretTreeRelaxed:
    case TheoremId::RegretStationary:
      return true;
    default:
      return false;
  }
}

bool BoundReport::allPreconditionsPass() const {
  for (const PreCheck& check : preconditions)
    if (!check.pass) return false;
  return true;
}

BoundReport regretBound(TheoremId id, int H, int S, int A, double T) {
  if (!isRegretTheorem(id))
    throw std::invalid_argument("regretBound: " + theoremName(id) + " is not a regret theorem");
  if (H < 1 || A < 1 || T <= 0.0)
    throw std::invalid_argument("regretBound: H, A must be positive and T > 0");

  BoundReport report;
  report.theoremId = id;
  report.inputs = {{"H", static_cast<double>(H)}, {"A", static_cast<double>(A)}, {"T", T}};
  const double h = H, a = A, s = S;

  switch (id) {
    case TheoremId::RegretS3: {
      report.formula = "H sqrt(AT) / (32 sqrt(2))";
      report.value = h * std::sqrt(a * T) / (32.0 * std::sqrt(2.0));
      report.preconditions.push_back({"A >= 2", A >= 2});
      report.preconditions.push_back({"H >= 2", H >= 2});
      report.preconditions.push_back({"T >= 2A", T >= 2.0 * a});
      report.preconditions.push_back(
          {"optimizer eps <= 1/4", optimalEpsilon(Family::S3Stationary, H, 0, 0, A, T).feasible});
      break;
    }
    case TheoremId::RegretS4: {
      report.formula = "sqrt(H^3 A T) / 128";
      report.value = std::sqrt(h * h * h * a * T) / 128.0;
      report.preconditions.push_back({"H >= 4", H >= 4});
      report.preconditions.push_back({"T >= HA", T >= h * a});
      report.preconditions.push_back(
          {"optimizer eps <= 1/4", optimalEpsilon(Family::S4Stage, H, 0, 0, A, T).feasible});
      break;
    }
    case TheoremId::RegretTree: {
      report.inputs["S"] = s;
      report.formula = "sqrt(H^3 S A T) / (48 sqrt(6))";
      report.value = std::sqrt(h * h * h * s * a * T) / (48.0 * std::sqrt(6.0));
      AssumptionReport shape = assumptionCheck(S, A, H);
      bool fullShapeRegime = shape.shapeValid && shape.regime == TreeRegime::FullTree && shape.horizonSufficient;
      report.preconditions.push_back({"full-tree shape with H >= 3d", fullShapeRegime});
      report.preconditions.push_back({"T >= HSA", T >= h * s * a});
      bool epsFeasible = false;
      if (shape.shapeValid)
        epsFeasible =
            optimalEpsilon(Family::Tree, H, std::max(1, H / 3), shape.leaves, A, T).feasible;
      report.preconditions.push_back({"optimizer eps <= 1/4", epsFeasible});
      break;
    }
    case TheoremId::RegretTreeRelaxed: {
      report.inputs["S"] = s;
      report.formula = "c3 sqrt(min(S, A^(H/3-2))) sqrt(H^3 A T), c3 = 1";
      report.value = std::sqrt(std::min(s, capTerm(A, H))) * std::sqrt(h * h * h * a * T);
      report.preconditions.push_back({"S >= 11", S >= 11});
      report.preconditions.push_back({"A >= 4", A >= 4});
      report.preconditions.push_back({"H >= 6", H >= 6});
      report.preconditions.push_back({"T >= HSA", T >= h * s * a});
      report.preconditions.push_back({"absolute constant c3 unspecified (reported with c3 = 1)", false});
      break;
    }
    case TheoremId::RegretStationary: {
      report.inputs["S"] = s;
      report.formula = "c sqrt(H^2 S A T), c = 1";
      report.value = std::sqrt(h * h * s * a * T);
      AssumptionReport shape = assumptionCheck(S, A, H);
      bool fullShape = shape.shapeValid && shape.regime == TreeRegime::FullTree;
      report.preconditions.push_back({"full tree shape exists", fullShape});
      report.preconditions.push_back({"H >= d+1", shape.shapeValid && H >= shape.depth + 1});
      report.preconditions.push_back({"order constant unspecified (reported with c = 1)", false});
      break;
    }
    default:
      break;
  }
  return report;
}

BoundReport bpiBound(TheoremId id, int H, int S, int A, double eps, double delta) {
  if (isRegretTheorem(id))
    throw std::invalid_argument("bpiBound: " + theoremName(id) + " is not a BPI/PAC theorem");
  if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("bpiBound: delta must lie in (0, 1)");
  if (eps <= 0.0) throw std::invalid_argument("bpiBound: eps must be positive");

  BoundReport report;
  report.theoremId = id;
  report.inputs = {{"H", static_cast<double>(H)},
                   {"A", static_cast<double>(A)},
                   {"eps", eps},
                   {"delta", delta}};
  const double h = H, a = A, s = S;
  const double logInvDelta = std::log(1.0 / delta);

  switch (id) {
    case TheoremId::BpiS4: {
      report.formula = "H^3 A log(1/(2.4 delta)) / (1024 eps^2)";
      double logTerm = std::log(1.0 / (2.4 * delta));
      report.value = std::max(0.0, h * h * h * a * logTerm / (1024.0 * eps * eps));
      report.preconditions.push_back({"H >= 4", H >= 4});
      report.preconditions.push_back({"eps <= (H/2-1)/8", eps <= (h / 2.0 - 1.0) / 8.0});
      report.preconditions.push_back({"log(1/(2.4 delta)) > 0", logTerm > 0.0});
      break;
    }
    case TheoremId::BpiTree: {
      report.inputs["S"] = s;
      report.formula = "H^3 S A log(1/delta) / (3456 eps^2)";
      report.value = h * h * h * s * a * logInvDelta / (3456.0 * eps * eps);
      AssumptionReport shape = assumptionCheck(S, A, H);
      bool fullShapeRegime = shape.shapeValid && shape.regime == TreeRegime::FullTree && shape.horizonSufficient;
      report.preconditions.push_back({"full-tree shape with H >= 3d", fullShapeRegime});
      report.preconditions.push_back({"eps <= H/24", eps <= h / 24.0});
      report.preconditions.push_back({"delta <= 1/16", delta <= 1.0 / 16.0});
      break;
    }
    case TheoremId::BpiTreeRelaxed: {
      report.inputs["S"] = s;
      report.formula = "c1 min(S, A^(H/3-2)) H^3 A log(1/delta) / eps^2, c1 = 1";
      report.value = std::min(s, capTerm(A, H)) * h * h * h * a * logInvDelta / (eps * eps);
      report.preconditions.push_back({"S >= 11", S >= 11});
      report.preconditions.push_back({"A >= 4", A >= 4});
      report.preconditions.push_back({"H >= 6", H >= 6});
      report.preconditions.push_back({"eps <= H/24", eps <= h / 24.0});
      report.preconditions.push_back({"delta <= 1/16", delta <= 1.0 / 16.0});
      report.preconditions.push_back({"absolute constant c1 unspecified (reported with c1 = 1)", false});
      break;
    }
    case TheoremId::BpiStationary: {
      report.inputs["S"] = s;
      report.formula = "c H^2 S A log(1/delta) / eps^2, c = 1";
      report.value = h * h * s * a * logInvDelta / (eps * eps);
      AssumptionReport shape = assumptionCheck(S, A, H);
      bool fullShape = shape.shapeValid && shape.regime == TreeRegime::FullTree;
      report.preconditions.push_back({"full tree shape exists", fullShape});
      report.preconditions.push_back({"H >= d+1", shape.shapeValid && H >= shape.depth + 1});
      report.preconditions.push_back({"order constant unspecified (reported with c = 1)", false});
      break;
    }
    case TheoremId::PacTree: {
      report.inputs["S"] = s;
      report.formula = "H^3 S A log(1/delta) / (6912 eps^2) - 1";
      report.value = h * h * h * s * a * logInvDelta / (6912.0 * eps * eps) - 1.0;
      AssumptionReport shape = assumptionCheck(S, A, H);
      bool fullShapeRegime = shape.shapeValid && shape.regime == TreeRegime::FullTree && shape.horizonSufficient;
      report.preconditions.push_back({"full-tree shape with H >= 3d", fullShapeRegime});
      report.preconditions.push_back({"eps <= H/24", eps <= h / 24.0});
      report.preconditions.push_back({"delta <= 1/16", delta <= 1.0 / 16.0});
      report.preconditions.push_back({"episode threshold positive", report.value >= 0.0});
      break;
    }
    case TheoremId::PacTreeRelaxed: {
      report.inputs["S"] = s;
      report.formula = "c2 min(S, A^(H/3-2)) H^3 A log(1/delta) / eps^2 - 1, c2 = 1";
      report.value = std::min(s, capTerm(A, H)) * h * h * h * a * logInvDelta / (eps * eps) - 1.0;
      report.preconditions.push_back({"S >= 11", S >= 11});
      report.preconditions.push_back({"A >= 4", A >= 4});
      report.preconditions.push_back({"H >= 6", H >= 6});
      report.preconditions.push_back({"eps <= H/24", eps <= h / 24.0});
      report.preconditions.push_back({"delta <= 1/16", delta <= 1.0 / 16.0});
      report.preconditions.push_back({"absolute constant c2 unspecified (reported with c2 = 1)", false});
      report.preconditions.push_back({"episode threshold positive", report.value >= 0.0});
      break;
    }
    default:
      break;
  }
  return report;
}

OptimalEpsilon optimalEpsilon(Family family, int H, int Hbar, int L, int A, double T) {
  if (T <= 0.0) throw std::invalid_argument("optimalEpsilon: T must be positive");
  double value = 0.0;
  switch (family) {
    case Family::S3Stationary: {
      double a = A;
      value = (1.0 - 1.0 / a) * std::sqrt(a / T) / (2.0 * std::sqrt(2.0));
      break;
    }
    case Family::S4Stage: {
      double ha = static_cast<double>(H) * A;
      value = 0.25 * (1.0 - 2.0 / ha) * std::sqrt(ha / T);
      break;
    }
    case Family::Tree:
    case Family::TreeStationary: {
      double arms = static_cast<double>(family == Family::TreeStationary ? 1 : Hbar) * L * A;
      if (arms < 1.0) throw std::invalid_argument("optimalEpsilon: tree families need Hbar, L, A >= 1");
      value = (1.0 - 1.0 / arms) * std::sqrt(arms / T) / (2.0 * std::sqrt(2.0));
      break;
    }
    case Family::S4Bpi:
      throw std::invalid_argument("optimalEpsilon: no regret optimizer for the s4-bpi family");
  }
  return {value, value <= 0.25};
}

double regretIdentity(Family family, int H, int Hbar, int d, double eps, double T,
                      double expectedOptArmCount) {
  if (expectedOptArmCount < 0.0 || expectedOptArmCount > T)
    throw std::out_of_range("regretIdentity: expected count must lie in [0, T]");
  double window = 0.0;
  switch (family) {
    case Family::Tree: window = H - Hbar - d; break;
    case Family::TreeStationary: window = H - d; break;
    case Family::S3Stationary: window = H - 1; break;
    case Family::S4Stage:
    case Family::S4Bpi: window = H - Hbar - 1; break;
  }
  return T * window * eps * (1.0 - expectedOptArmCount / T);
}

AssumptionReport assumptionCheck(int S, int A, int H) {
  AssumptionReport report;
  report.shapeValid = S >= 6 && A >= 2;
  report.effectiveStates = S;
  if (!report.shapeValid) return report;

  std::optional<int> exactDepth = assumptionDepth(S, A);
  int d = exactDepth ? *exactDepth : relaxedDepth(S, A);
  if (H >= 3 * d) {
    report.regime = exactDepth ? TreeRegime::FullTree : TreeRegime::RelaxedTree;
    report.depth = d;
    report.leaves = buildTreeShape(S, A, true).numLeaves();
    report.horizonSufficient = true;
    return report;
  }
  report.regime = TreeRegime::ExponentialCap;
  report.effectiveStates = std::min<long long>(S, ceilCapStates(A, H));
  TreeShape capped = instanceTreeShape(S, A, H);
  report.depth = capped.depth;
  report.leaves = capped.numLeaves();
  report.horizonSufficient = H >= 3 * capped.depth;
  return report;
}

}  // namespace hardmdp
