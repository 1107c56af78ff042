#include "hardmdp/instances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hardmdp {

namespace {

constexpr long long kNodeCap = 1LL << 40;

long long ceilDiv(long long a, long long b) { return (a + b - 1) / b; }

// 1 + A + ... + A^(d-1), saturated at kNodeCap.
long long fullTreeNodes(int A, int d) {
  long long total = 0, level = 1;
  for (int i = 0; i < d; ++i) {
    total += level;
    if (total >= kNodeCap) return kNodeCap;
    level *= A;
    if (level >= kNodeCap) level = kNodeCap;
  }
  return total;
}

// Smallest d such that a full tree of d levels holds at least `budget` nodes.
int depthForBudget(int A, long long budget) {
  int d = 1;
  while (fullTreeNodes(A, d) < budget) ++d;
  return d;
}

// Node cost of a tree with all leaves at level d-1 and L leaves: each level
// needs at least ceil(next/A) nodes, and at least one.
long long profileCost(int A, int d, long long leaves, std::vector<long long>* profile = nullptr) {
  std::vector<long long> counts(d);
  counts[d - 1] = leaves;
  for (int i = d - 2; i >= 0; --i) counts[i] = std::max(1LL, ceilDiv(counts[i + 1], A));
  long long total = 0;
  for (long long c : counts) total += c;
  if (profile) *profile = std::move(counts);
  return total;
}

TreeShape shapeFromProfile(int A, const std::vector<long long>& profile) {
  TreeShape shape;
  shape.numActions = A;
  shape.depth = static_cast<int>(profile.size());
  long long totalNodes = 0;
  for (long long c : profile) totalNodes += c;
  shape.nodeParents.assign(totalNodes, -1);
  shape.nodeLevel.assign(totalNodes, 0);
  shape.childrenByAction.assign(totalNodes, std::vector<int>(A, -1));

  std::vector<long long> levelOffset(profile.size());
  long long offset = 0;
  for (size_t i = 0; i < profile.size(); ++i) {
    levelOffset[i] = offset;
    for (long long j = 0; j < profile[i]; ++j) shape.nodeLevel[offset + j] = static_cast<int>(i);
    offset += profile[i];
  }

  // Children of level i+1 are dealt to level-i parents left to right in
  // contiguous blocks; every parent gets at least one child.
  for (size_t i = 0; i + 1 < profile.size(); ++i) {
    long long parents = profile[i], children = profile[i + 1];
    long long base = children / parents, extra = children % parents;
    long long childCursor = levelOffset[i + 1];
    for (long long p = 0; p < parents; ++p) {
      long long count = base + (p < extra ? 1 : 0);
      int parentNode = static_cast<int>(levelOffset[i] + p);
      for (long long c = 0; c < count; ++c)
        shape.nodeParents[childCursor + c] = parentNode;
      for (int a = 0; a < A; ++a) {
        long long slot = std::min<long long>(a, count - 1);
        shape.childrenByAction[parentNode][a] = static_cast<int>(childCursor + slot);
      }
      childCursor += count;
    }
  }

  for (long long j = 0; j < profile.back(); ++j)
    shape.leaves.push_back(static_cast<int>(levelOffset.back() + j));
  return shape;
}

// Tree on at most `budget` nodes, all leaves at level d-1 for
// d = ceil(log_A(budget (A-1) + 1)), leaf count maximized.
TreeShape relaxedShape(int A, long long budget) {
  int d = depthForBudget(A, budget);
  long long lo = 1, hi = budget;
  while (lo < hi) {
    long long mid = lo + (hi - lo + 1) / 2;
    if (profileCost(A, d, mid) <= budget)
      lo = mid;
    else
      hi = mid - 1;
  }
  std::vector<long long> profile;
  long long used = profileCost(A, d, lo, &profile);
  TreeShape shape = shapeFromProfile(A, profile);
  shape.mergedStates = static_cast<int>(budget - used);
  return shape;
}

}  // namespace

std::vector<int> TreeShape::pathActionsTo(int leafNode) const {
  std::vector<int> actions;
  int node = leafNode;
  while (nodeParents[node] >= 0) {
    int parent = nodeParents[node];
    int chosen = -1;
    for (int a = 0; a < numActions; ++a)
      if (childrenByAction[parent][a] == node) {
        chosen = a;
        break;
      }
    actions.push_back(chosen);
    node = parent;
  }
  std::reverse(actions.begin(), actions.end());
  return actions;
}

TreeShape buildTreeShape(int S, int A, bool relaxed) {
  if (S < 6) throw std::invalid_argument("buildTreeShape: S must be at least 6");
  if (A < 2) throw std::invalid_argument("buildTreeShape: A must be at least 2");
  long long budget = S - 3;
  int d = depthForBudget(A, budget);
  if (fullTreeNodes(A, d) == budget) {
    std::vector<long long> profile(d);
    long long level = 1;
    for (int i = 0; i < d; ++i, level *= A) profile[i] = level;
    return shapeFromProfile(A, profile);
  }
  if (!relaxed)
    throw std::invalid_argument(
        "buildTreeShape: no integer depth matches S = 3 + (A^d-1)/(A-1); use the relaxed construction");
  return relaxedShape(A, budget);
}

int balancedTreeLeafCount(int S, int A) {
  if (S < 1 || A < 2) throw std::invalid_argument("balancedTreeLeafCount: need S >= 1, A >= 2");
  if (S == 1) return 1;
  return static_cast<int>(S - ceilDiv(S - 1, A));
}

std::optional<int> assumptionDepth(int S, int A) {
  if (S < 6 || A < 2) return std::nullopt;
  int d = depthForBudget(A, S - 3);
  if (fullTreeNodes(A, d) == S - 3) return d;
  return std::nullopt;
}

int relaxedDepth(int S, int A) {
  if (S < 6 || A < 2) throw std::invalid_argument("relaxedDepth: need S >= 6, A >= 2");
  return depthForBudget(A, S - 3);
}

std::string familyName(Family family) {
  switch (family) {
    case Family::Tree: return "tree";
    case Family::TreeStationary: return "tree-stationary";
    case Family::S3Stationary: return "s3-stationary";
    case Family::S4Stage: return "s4-stage";
    case Family::S4Bpi: return "s4-bpi";
  }
  throw std::logic_error("unreachable family");
}

Family familyFromName(const std::string& name) {
  if (name == "tree") return Family::Tree;
  if (name == "tree-stationary") return Family::TreeStationary;
  if (name == "s3-stationary" || name == "s3") return Family::S3Stationary;
  if (name == "s4-stage" || name == "s4") return Family::S4Stage;
  if (name == "s4-bpi") return Family::S4Bpi;
  throw std::invalid_argument("unknown family: " + name);
}

std::string HardInstanceParams::label() const {
  if (!arm) return "M0";
  std::ostringstream out;
  out << "M(";
  bool first = true;
  auto field = [&](const char* k, int v) {
    if (v < 0) return;
    if (!first) out << ",";
    out << k << "=" << v;
    first = false;
  };
  field("h", arm->stage);
  field("l", arm->leaf);
  field("a", arm->action);
  out << ")";
  return out.str();
}

namespace {

[[noreturn]] void fail(const std::string& message) { throw std::invalid_argument(message); }

void checkCommon(const HardInstanceParams& p, double epsMax) {
  if (p.A < 2) fail("instance: A must be at least 2");
  if (p.eps < 0.0 || p.eps > epsMax) {
    std::ostringstream out;
    out << "instance: eps must lie in [0, " << epsMax << "]";
    fail(out.str());
  }
}

}  // namespace

// Full tree when an exact integer depth exists and H >= 3d, otherwise the
// relaxed construction, capped at ceil(A^(H/3-2)) nodes when H < 3d.
TreeShape instanceTreeShape(int S, int A, int H) {
  if (S < 6) throw std::invalid_argument("tree instance: S must be at least 6");
  if (A < 2) throw std::invalid_argument("tree instance: A must be at least 2");
  long long budget = S - 3;
  int exactD = depthForBudget(A, budget);
  if (fullTreeNodes(A, exactD) == budget && H >= 3 * exactD) return buildTreeShape(S, A, false);
  int d = depthForBudget(A, budget);
  if (H < 3 * d) {
    double raw = std::pow(static_cast<double>(A), H / 3.0 - 2.0);
    long long cap = std::max(1LL, static_cast<long long>(std::ceil(raw)));
    budget = std::min(budget, cap);
  }
  TreeShape shape = relaxedShape(A, budget);
  shape.mergedStates = static_cast<int>((S - 3) - shape.numNodes());
  return shape;
}

namespace {

struct TreeLayout {
  int sWait = -1;
  int firstNode = 0;
  int sGood = 0;
  int sBad = 0;
  int total = 0;
};

TreeLayout treeLayout(const TreeShape& shape, bool hasWait) {
  TreeLayout layout;
  int n = shape.numNodes() + shape.mergedStates;
  if (hasWait) {
    layout.sWait = 0;
    layout.firstNode = 1;
  }
  layout.sGood = layout.firstNode + n;
  layout.sBad = layout.sGood + 1;
  layout.total = layout.sBad + 1;
  return layout;
}

void fillAbsorbing(Mdp& m, int state) {
  for (int h = 0; h + 1 < m.horizon; ++h)
    for (int a = 0; a < m.numActions; ++a)
      m.kernelRow(h, state, a)[state] = 1.0;
}

}  // namespace

HardInstance buildInstance(const HardInstanceParams& params) {
  HardInstance inst;
  inst.params = params;
  const int A = params.A, H = params.H, Hbar = params.Hbar;

  switch (params.family) {
    case Family::Tree:
    case Family::TreeStationary: {
      const bool stationary = params.family == Family::TreeStationary;
      checkCommon(params, stationary ? 0.25 : 0.5);
      // The stationary variant has no waiting window, so the horizon only
      // needs to cover one tree traversal; no exponential-horizon capping.
      TreeShape shape =
          stationary ? buildTreeShape(params.S, A, true) : instanceTreeShape(params.S, A, H);
      const int d = shape.depth;
      const int L = shape.numLeaves();
      if (stationary) {
        if (H < d + 1) fail("stationary tree: H must be at least d+1");
      } else {
        if (Hbar < 1) fail("tree instance: Hbar must be at least 1");
        if (Hbar + d > H - 1) fail("tree instance: need Hbar + d <= H - 1");
      }
      if (params.arm) {
        const Arm& arm = *params.arm;
        if (arm.leaf < 0 || arm.leaf >= L) fail("tree instance: leaf index out of range");
        if (arm.action < 0 || arm.action >= A) fail("tree instance: action out of range");
        if (!stationary && (arm.stage < 1 + d || arm.stage > Hbar + d))
          fail("tree instance: h* must lie in {1+d, ..., Hbar+d}");
      }
      TreeLayout layout = treeLayout(shape, !stationary);
      Mdp m = Mdp::zeros(layout.total, A, H);
      m.initialDist[stationary ? layout.firstNode : layout.sWait] = 1.0;

      const int armStage = params.arm ? (stationary ? d : params.arm->stage) : -1;
      const int armNode = params.arm ? shape.leaves[params.arm->leaf] : -1;
      const int armAction = params.arm ? params.arm->action : -1;

      for (int h1 = 1; h1 < H; ++h1) {
        const int h = h1 - 1;
        if (!stationary) {
          for (int a = 0; a < A; ++a) {
            auto row = m.kernelRow(h, layout.sWait, a);
            // The agent may stay at s_w through stage Hbar and is then forced
            // out, so a leaf is reached within {1+d, ..., Hbar+d} surely.
            if (a == 0 && h1 <= Hbar - 1)
              row[layout.sWait] = 1.0;
            else
              row[layout.firstNode] = 1.0;
          }
        }
        for (int node = 0; node < shape.numNodes(); ++node) {
          const int state = layout.firstNode + node;
          for (int a = 0; a < A; ++a) {
            auto row = m.kernelRow(h, state, a);
            if (shape.isLeaf(node)) {
              double delta = 0.0;
              if (params.arm && node == armNode && a == armAction &&
                  (stationary || h1 == armStage))
                delta = params.eps;
              row[layout.sGood] = 0.5 + delta;
              row[layout.sBad] = 0.5 - delta;
            } else {
              row[layout.firstNode + shape.childrenByAction[node][a]] = 1.0;
            }
          }
        }
        for (int k = 0; k < shape.mergedStates; ++k) {
          int state = layout.firstNode + shape.numNodes() + k;
          for (int a = 0; a < A; ++a) m.kernelRow(h, state, a)[state] = 1.0;
        }
      }
      fillAbsorbing(m, layout.sGood);
      fillAbsorbing(m, layout.sBad);

      const int rewardStart = stationary ? d + 1 : Hbar + d + 1;
      for (int h1 = rewardStart; h1 <= H; ++h1)
        for (int a = 0; a < A; ++a) m.reward(h1 - 1, layout.sGood, a) = 1.0;

      inst.mdp = std::move(m);
      inst.shape = std::move(shape);
      inst.waitAction = stationary ? -1 : 0;
      inst.windowFirstStage = stationary ? d : 1 + d;
      inst.windowLastStage = stationary ? d : Hbar + d;
      if (!stationary) inst.stateNames["s_w"] = layout.sWait;
      inst.stateNames["s_root"] = layout.firstNode;
      for (int i = 0; i < inst.shape->numLeaves(); ++i)
        inst.stateNames["leaf_" + std::to_string(i)] = layout.firstNode + inst.shape->leaves[i];
      for (int k = 0; k < inst.shape->mergedStates; ++k)
        inst.stateNames["merged_" + std::to_string(k)] = layout.firstNode + inst.shape->numNodes() + k;
      inst.stateNames["s_g"] = layout.sGood;
      inst.stateNames["s_b"] = layout.sBad;
      if (params.arm)
        inst.armEvent = ArmEvent{armStage, layout.firstNode + armNode, armAction};
      break;
    }

    case Family::S3Stationary: {
      checkCommon(params, 0.25);
      if (H < 2) fail("s3 instance: H must be at least 2");
      if (params.arm && (params.arm->action < 0 || params.arm->action >= A))
        fail("s3 instance: action out of range");
      const int s1 = 0, sg = 1, sb = 2;
      Mdp m = Mdp::zeros(3, A, H);
      m.initialDist[s1] = 1.0;
      for (int h = 0; h + 1 < H; ++h) {
        for (int a = 0; a < A; ++a) {
          double delta = (params.arm && a == params.arm->action) ? params.eps : 0.0;
          auto row = m.kernelRow(h, s1, a);
          row[sg] = 0.5 + delta;
          row[sb] = 0.5 - delta;
        }
      }
      fillAbsorbing(m, sg);
      fillAbsorbing(m, sb);
      for (int h = 0; h < H; ++h)
        for (int a = 0; a < A; ++a) m.reward(h, sg, a) = 1.0;
      inst.mdp = std::move(m);
      inst.stateNames = {{"s_1", s1}, {"s_g", sg}, {"s_b", sb}};
      inst.windowFirstStage = inst.windowLastStage = 1;
      if (params.arm) inst.armEvent = ArmEvent{1, s1, params.arm->action};
      break;
    }

    case Family::S4Stage:
    case Family::S4Bpi: {
      const bool bpi = params.family == Family::S4Bpi;
      checkCommon(params, bpi ? 0.125 : 0.25);
      if (H < 4) fail("s4 instance: H must be at least 4");
      if (Hbar < 1 || Hbar > H - 2) fail("s4 instance: need 1 <= Hbar <= H - 2");
      auto checkArm = [&](const Arm& arm, const char* who) {
        if (arm.stage < 2 || arm.stage > Hbar + 1)
          fail(std::string("s4 instance: ") + who + " stage must lie in {2, ..., Hbar+1}");
        if (arm.action < 0 || arm.action >= A)
          fail(std::string("s4 instance: ") + who + " action out of range");
      };
      if (params.arm) checkArm(*params.arm, "arm");
      if (bpi) {
        if (!params.refArm) fail("s4-bpi instance: reference arm (h0, a0) is required");
        checkArm(*params.refArm, "reference arm");
        if (params.arm && params.arm->stage == params.refArm->stage &&
            params.arm->action == params.refArm->action)
          fail("s4-bpi instance: arm must differ from the reference arm");
      } else if (params.refArm) {
        fail("s4 instance: reference arm only applies to the s4-bpi family");
      }
      const int sw = 0, s1 = 1, sg = 2, sb = 3;
      Mdp m = Mdp::zeros(4, A, H);
      m.initialDist[sw] = 1.0;
      for (int h1 = 1; h1 < H; ++h1) {
        const int h = h1 - 1;
        for (int a = 0; a < A; ++a) {
          auto wrow = m.kernelRow(h, sw, a);
          if (a == 0 && h1 <= Hbar - 1)
            wrow[sw] = 1.0;
          else
            wrow[s1] = 1.0;
          double delta = 0.0;
          if (bpi) {
            if (h1 == params.refArm->stage && a == params.refArm->action) delta += params.eps;
            if (params.arm && h1 == params.arm->stage && a == params.arm->action)
              delta += 2.0 * params.eps;
          } else if (params.arm && h1 == params.arm->stage && a == params.arm->action) {
            delta = params.eps;
          }
          auto row = m.kernelRow(h, s1, a);
          row[sg] = 0.5 + delta;
          row[sb] = 0.5 - delta;
        }
      }
      fillAbsorbing(m, sg);
      fillAbsorbing(m, sb);
      for (int h1 = Hbar + 2; h1 <= H; ++h1)
        for (int a = 0; a < A; ++a) m.reward(h1 - 1, sg, a) = 1.0;
      inst.mdp = std::move(m);
      inst.stateNames = {{"s_w", sw}, {"s_1", s1}, {"s_g", sg}, {"s_b", sb}};
      inst.waitAction = 0;
      inst.windowFirstStage = 2;
      inst.windowLastStage = Hbar + 1;
      if (params.arm)
        inst.armEvent = ArmEvent{params.arm->stage, s1, params.arm->action};
      else if (bpi)
        inst.armEvent = ArmEvent{params.refArm->stage, s1, params.refArm->action};
      break;
    }
  }
  return inst;
}

double HardInstance::optimalValueClosedForm() const {
  const auto& p = params;
  const bool hasArm = p.arm.has_value();
  switch (p.family) {
    case Family::Tree: {
      double w = p.H - p.Hbar - shape->depth;
      return w * (0.5 + (hasArm ? p.eps : 0.0));
    }
    case Family::TreeStationary: {
      double w = p.H - shape->depth;
      return w * (0.5 + (hasArm ? p.eps : 0.0));
    }
    case Family::S3Stationary:
      return (p.H - 1) * (0.5 + (hasArm ? p.eps : 0.0));
    case Family::S4Stage:
      return (p.H - p.Hbar - 1) * (0.5 + (hasArm ? p.eps : 0.0));
    case Family::S4Bpi:
      return (p.H - p.Hbar - 1) * (0.5 + (hasArm ? 2.0 * p.eps : p.eps));
  }
  throw std::logic_error("unreachable family");
}

bool HardInstance::decisiveState(int state) const {
  if (shape) {
    int firstNode = stateNames.at("s_root");
    for (int leaf : shape->leaves)
      if (state == firstNode + leaf) return true;
    return false;
  }
  return state == stateNames.at("s_1");
}

ArmEvent HardInstance::eventForArm(const Arm& arm) const {
  switch (params.family) {
    case Family::Tree:
      return {arm.stage, stateNames.at("s_root") + shape->leaves[arm.leaf], arm.action};
    case Family::TreeStationary:
      return {shape->depth, stateNames.at("s_root") + shape->leaves[arm.leaf], arm.action};
    case Family::S3Stationary:
      return {1, stateNames.at("s_1"), arm.action};
    case Family::S4Stage:
    case Family::S4Bpi:
      return {arm.stage, stateNames.at("s_1"), arm.action};
  }
  throw std::logic_error("unreachable family");
}

MarkovPolicy HardInstance::armReachingPolicy(const ArmEvent& event) const {
  std::vector<std::vector<int>> actions(mdp.horizon, std::vector<int>(mdp.numStates, 0));
  const bool hasWait = waitAction >= 0;
  if (shape) {
    const int firstNode = stateNames.at("s_root");
    const int leafNode = event.state - firstNode;
    std::vector<int> path = shape->pathActionsTo(leafNode);
    // Per-state path actions are stage independent; only the waiting state
    // needs stage-dependent behavior.
    int node = leafNode;
    for (int i = static_cast<int>(path.size()) - 1; i >= 0; --i) {
      node = shape->nodeParents[node];
      for (int h = 0; h < mdp.horizon; ++h) actions[h][firstNode + node] = path[i];
    }
    for (int h = 0; h < mdp.horizon; ++h) actions[h][event.state] = event.action;
    if (hasWait) {
      const int leaveStage = event.stage - shape->depth;  // 1-based
      for (int h1 = 1; h1 <= mdp.horizon; ++h1)
        actions[h1 - 1][stateNames.at("s_w")] = (h1 < leaveStage) ? waitAction : 1;
    }
  } else if (params.family == Family::S3Stationary) {
    for (int h = 0; h < mdp.horizon; ++h) actions[h][event.state] = event.action;
  } else {
    const int leaveStage = event.stage - 1;
    for (int h1 = 1; h1 <= mdp.horizon; ++h1) {
      actions[h1 - 1][stateNames.at("s_w")] = (h1 < leaveStage) ? waitAction : 1;
      if (h1 == event.stage) actions[h1 - 1][event.state] = event.action;
    }
  }
  return MarkovPolicy::deterministic(mdp, actions);
}

Mdp makeTreeInstance(const HardInstanceParams& params) {
  if (params.family != Family::Tree && params.family != Family::TreeStationary)
    fail("makeTreeInstance: params must use the tree or tree-stationary family");
  return buildInstance(params).mdp;
}

Mdp makeS3Stationary(int A, int H, std::optional<int> armAction, double eps) {
  HardInstanceParams p{Family::S3Stationary, 3, A, H, 0, eps, std::nullopt, std::nullopt};
  if (armAction) p.arm = Arm{-1, -1, *armAction};
  return buildInstance(p).mdp;
}

Mdp makeS4Stage(int A, int H, int Hbar, std::optional<Arm> arm, double eps) {
  HardInstanceParams p{Family::S4Stage, 4, A, H, Hbar, eps, arm, std::nullopt};
  return buildInstance(p).mdp;
}

Mdp makeS4Bpi(int A, int H, int Hbar, Arm refArm, std::optional<Arm> arm, double epsTilde) {
  HardInstanceParams p{Family::S4Bpi, 4, A, H, Hbar, epsTilde, arm, refArm};
  return buildInstance(p).mdp;
}

Mdp makeStationaryTree(int S, int A, int H, std::optional<Arm> arm, double eps) {
  HardInstanceParams p{Family::TreeStationary, S, A, H, 0, eps, arm, std::nullopt};
  return buildInstance(p).mdp;
}

std::vector<Arm> classArms(const ClassSpec& spec) {
  std::vector<Arm> arms;
  switch (spec.family) {
    case Family::Tree: {
      HardInstanceParams probe{spec.family, spec.S, spec.A, spec.H, spec.Hbar, spec.eps,
                               std::nullopt, std::nullopt};
      TreeShape shape = buildInstance(probe).shape.value();
      for (int h = 1 + shape.depth; h <= spec.Hbar + shape.depth; ++h)
        for (int l = 0; l < shape.numLeaves(); ++l)
          for (int a = 0; a < spec.A; ++a) arms.push_back({h, l, a});
      break;
    }
    case Family::TreeStationary: {
      HardInstanceParams probe{spec.family, spec.S, spec.A, spec.H, 0, spec.eps, std::nullopt,
                               std::nullopt};
      TreeShape shape = buildInstance(probe).shape.value();
      for (int l = 0; l < shape.numLeaves(); ++l)
        for (int a = 0; a < spec.A; ++a) arms.push_back({-1, l, a});
      break;
    }
    case Family::S3Stationary:
      for (int a = 0; a < spec.A; ++a) arms.push_back({-1, -1, a});
      break;
    case Family::S4Stage:
      for (int h = 2; h <= spec.Hbar + 1; ++h)
        for (int a = 0; a < spec.A; ++a) arms.push_back({h, -1, a});
      break;
    case Family::S4Bpi: {
      if (!spec.refArm) fail("classArms: s4-bpi class needs a reference arm");
      for (int h = 2; h <= spec.Hbar + 1; ++h)
        for (int a = 0; a < spec.A; ++a) {
          if (h == spec.refArm->stage && a == spec.refArm->action) continue;
          arms.push_back({h, -1, a});
        }
      break;
    }
  }
  return arms;
}

std::vector<HardInstanceParams> enumerateClass(const ClassSpec& spec) {
  std::vector<HardInstanceParams> out;
  HardInstanceParams base{spec.family, spec.S, spec.A, spec.H, spec.Hbar, spec.eps,
                          std::nullopt, spec.refArm};
  out.push_back(base);
  for (const Arm& arm : classArms(spec)) {
    HardInstanceParams p = base;
    p.arm = arm;
    out.push_back(p);
  }
  return out;
}

}  // namespace hardmdp
