#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hardmdp/mdp.hpp"

namespace hardmdp {

// Hard-instance families. Stage parameters (hStar, h0, Hbar) are 1-based,
// matching the stage convention of the accompanying closed forms; state and
// action indices are dense 0-based.
enum class Family { Tree, TreeStationary, S3Stationary, S4Stage, S4Bpi };

std::string familyName(Family family);
Family familyFromName(const std::string& name);

// A-ary tree layout over the instance's interior states. Node indices are
// tree-local (root = 0); the instance builders map them onto MDP states.
// All leaves sit at level depth-1.
struct TreeShape {
  int numActions = 0;
  int depth = 0;
  std::vector<int> nodeParents;                  // -1 for the root
  std::vector<std::vector<int>> childrenByAction;  // A slots per node; -1 on leaves
  std::vector<int> nodeLevel;
  std::vector<int> leaves;
  int mergedStates = 0;  // surplus states folded into absorbers

  int numNodes() const { return static_cast<int>(nodeParents.size()); }
  int numLeaves() const { return static_cast<int>(leaves.size()); }
  bool isLeaf(int node) const { return nodeLevel[node] == depth - 1; }
  // Actions taken at levels 0..depth-2 to walk from the root to the leaf.
  std::vector<int> pathActionsTo(int leafNode) const;
};

// Full A-ary tree when S = 3 + (A^d - 1)/(A - 1) for an integer d;
// otherwise, with relaxed = true, a tree on at most S-3 nodes whose leaves
// all sit at level d-1 for d = ceil(log_A((S-3)(A-1) + 1)), built by
// left-filling a nondecreasing level profile that maximizes the leaf count.
TreeShape buildTreeShape(int S, int A, bool relaxed = false);

// Integer d with S = 3 + (A^d - 1)/(A - 1), if one exists.
std::optional<int> assumptionDepth(int S, int A);
// ceil(log_A((S-3)(A-1) + 1)).
int relaxedDepth(int S, int A);
// The shape an instance with the given horizon actually uses: full when an
// exact integer depth exists and H >= 3d, else relaxed, capped at
// ceil(A^(H/3-2)) nodes when H < 3d.
TreeShape instanceTreeShape(int S, int A, int H);

// Leaf count of the BFS-balanced A-ary tree on S nodes (nodes with no
// children); the quantity bounded below by S/4.
int balancedTreeLeafCount(int S, int A);

struct Arm {
  int stage = -1;   // h*, 1-based; unused (-1) for s3 and stationary-tree arms
  int leaf = -1;    // index into TreeShape::leaves; tree families only
  int action = -1;  // a*

  friend bool operator==(const Arm&, const Arm&) = default;
};

struct HardInstanceParams {
  Family family = Family::Tree;
  int S = 0;
  int A = 0;
  int H = 0;
  int Hbar = 0;                // waiting window; ignored by s3 and stationary tree
  double eps = 0.0;            // kernel-level gap (eps, eps', or epsTilde)
  std::optional<Arm> arm;      // empty = reference MDP
  std::optional<Arm> refArm;   // (h0, a0); s4-bpi only

  std::string label() const;
};

// The single (stage, state, action) whose kernel row an arm boosts.
struct ArmEvent {
  int stage = 0;  // 1-based
  int state = 0;
  int action = 0;

  friend bool operator==(const ArmEvent&, const ArmEvent&) = default;
};

// A constructed instance together with its debugging name map and layout.
struct HardInstance {
  HardInstanceParams params;
  Mdp mdp;
  std::map<std::string, int> stateNames;
  int waitAction = -1;  // -1 when the family has no waiting state
  std::optional<TreeShape> shape;

  // 1-based first and last stages at which the decisive state (a tree leaf,
  // or s1 for the compact families) can be occupied.
  int windowFirstStage = 0;
  int windowLastStage = 0;

  // The boosted row of this instance's own arm (empty for reference MDPs of
  // every family except s4-bpi, whose reference boosts (h0, a0)).
  std::optional<ArmEvent> armEvent;

  double optimalValueClosedForm() const;
  // Deterministic Markov policy that reaches the given arm event.
  MarkovPolicy armReachingPolicy(const ArmEvent& event) const;
  // The (stage, state, action) triple for an arm of this instance's class.
  ArmEvent eventForArm(const Arm& arm) const;
  bool decisiveState(int state) const;  // leaf or s1
};

HardInstance buildInstance(const HardInstanceParams& params);

// Per-operation constructors; thin wrappers over buildInstance.
Mdp makeTreeInstance(const HardInstanceParams& params);
Mdp makeS3Stationary(int A, int H, std::optional<int> armAction, double eps);
Mdp makeS4Stage(int A, int H, int Hbar, std::optional<Arm> arm, double eps);
Mdp makeS4Bpi(int A, int H, int Hbar, Arm refArm, std::optional<Arm> arm, double epsTilde);
// Stationary variant of the tree family: the waiting state is removed, so
// the emitted MDP has S-1 states (tree on S-3 nodes plus the two absorbers).
Mdp makeStationaryTree(int S, int A, int H, std::optional<Arm> arm, double eps);

struct ClassSpec {
  Family family = Family::Tree;
  int S = 0;
  int A = 0;
  int H = 0;
  int Hbar = 0;
  double eps = 0.0;
  std::optional<Arm> refArm;  // s4-bpi
};

// Reference MDP first, then all arms in lexicographic order.
std::vector<HardInstanceParams> enumerateClass(const ClassSpec& spec);

// All arm triples of the class, in enumeration order (excluding the
// reference).
std::vector<Arm> classArms(const ClassSpec& spec);

}  // namespace hardmdp
