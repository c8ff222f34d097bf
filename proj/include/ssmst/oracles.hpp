#pragma once

#include <optional>
#include <vector>

#include "ssmst/bigint.hpp"
#include "ssmst/rules.hpp"
#include "ssmst/state.hpp"

namespace ssmst {

// |size_v[0] - 1 - sum of children's size counts|
std::uint64_t s_value(const Configuration& c, NodeId v);

struct PotentialResult {
  BigUint value;
  bool defined = true;  // false when the parent graph has a cycle
};

// Phi = sum over nodes with s(v) != 0 of (n+1)^depth(v), per fragment,
// summed across fragments. Undefined in the presence of parent cycles.
PotentialResult phi(const Configuration& c);

// Lambda = sum over nodes with L(v) != 0 of (n+1)^(n+1-depth(v)).
// Meaningful once phi is zero; computed regardless and flagged like phi.
PotentialResult lambda(const Configuration& c);

// The per-node label discrepancy L(v) used by lambda.
std::uint64_t label_discrepancy(const Configuration& c, NodeId v);

struct FragmentClass {
  NodeId root;
  std::vector<NodeId> members;
  bool f1 = false, f2 = false, f3 = false, f4 = false, f5 = false;
};

// F1..F5 attractor membership per fragment (cycle debris excluded).
std::vector<FragmentClass> classify_fragments(const Configuration& c);

// Explicit rooted tree for decoder checks: parent[i] over dense indices.
struct RootedTree {
  GraphPtr graph;
  std::vector<std::optional<NodeId>> parent;  // by node index

  std::optional<NodeId> parent_of(NodeId v) const { return parent[graph->index_of(v)]; }
  std::vector<NodeId> root_path(NodeId v) const;  // v up to the root, inclusive
};

// Deepest common node of the two root paths; nullopt for separate trees.
std::optional<NodeId> brute_force_lca(const RootedTree& t, NodeId u, NodeId v);

enum class MstVerdict { Legitimate, NotSpanning, NotTree, NotMinimal };

struct MstCheck {
  MstVerdict verdict = MstVerdict::NotSpanning;
  Weight tree_weight = 0;
  Weight oracle_weight = 0;
  Weight gap = 0;  // tree - oracle when NotMinimal
};

// Does the parent graph form a spanning tree of Kruskal-minimal weight?
MstCheck check_mst(const Configuration& c);

// Maximum-EdgeKey edge on the tree path between u and v; nullopt when u = v
// or they sit in different trees.
std::optional<Edge> path_max_oracle(const RootedTree& t, NodeId u, NodeId v);

// Parent structure of a configuration as a RootedTree (cycle debris keeps
// nullopt parents sorted out by callers via parent_forest).
RootedTree tree_of_configuration(const Configuration& c);

}  // namespace ssmst
