#pragma once

#include <optional>
#include <vector>

#include "ssmst/state.hpp"

namespace ssmst {

// Per-node verdicts of the labeling predicates.
struct LabelingVerdict {
  bool leaf = false;
  bool sizec = false;
  bool label_r = false;
  bool label_nd = false;
  bool label_ok = false;  // label_r || label_nd
  bool heavy = false;
  bool light = false;
};

// C(v): neighbors whose parent pointer names v. Sorted by id.
std::vector<NodeId> children(const Configuration& c, NodeId v);

// nbrNdS(v): (1 + sum of children sizes, max id among children of maximal
// size). Contract: children(c,v) nonempty.
SizeInfo nbr_nd_s(const Configuration& c, NodeId v);

LabelingVerdict predicates(const Configuration& c, NodeId v);

// R_SC "size correction"
bool guard_RSC(const Configuration& c, NodeId v);
NodeState act_RSC(const Configuration& c, NodeId v);

// R_LC "label correction". A root with a wrong label resets to (id,0).
bool guard_RLC(const Configuration& c, NodeId v);
NodeState act_RLC(const Configuration& c, NodeId v);

// Decoder: label of the nearest common ancestor of two labeled nodes, or
// nullopt when the labels prove the nodes sit in different fragments.
std::optional<Label> nca_decode(const Label& lu, const Label& lv);

}  // namespace ssmst
