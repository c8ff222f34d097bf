#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ssmst/labeling.hpp"
#include "ssmst/state.hpp"

namespace ssmst {

// Priority order is exactly the declaration order, RCorrect highest.
enum class RuleId { RCorrect, RSC, RLC, RMin, RMerge, RDist, REnd, RRec };

const char* rule_name(RuleId r);
std::optional<RuleId> rule_from_name(const std::string& name);

// Distance(v): root with d=0, or d = parent's d + 1.
bool guard_distance(const Configuration& c, NodeId v);

// CorrectF(v) = Distance ∧ SizeC ∧ Label.
bool correctF(const Configuration& c, NodeId v);

// --- correction ------------------------------------------------------------

bool guard_RCorrect(const Configuration& c, NodeId v);
NodeState rule_RCorrect(const Configuration& c, NodeId v);

// --- labeling composition ---------------------------------------------------

bool guard_RSC_mst(const Configuration& c, NodeId v);
bool guard_RLC_mst(const Configuration& c, NodeId v);

// --- merging ----------------------------------------------------------------

// OE(v): adjacent edges whose endpoint labels decode to "different
// fragment", EdgeKey order. Excludes children and the parent.
std::vector<Edge> outgoing_edges(const Configuration& c, NodeId v);

std::optional<Weight> cand_local(const Configuration& c, NodeId v);
std::optional<Weight> cand_children(const Configuration& c, NodeId v);
std::optional<Weight> candidate(const Configuration& c, NodeId v);

// Witness edge for a candidate weight: the EdgeKey-minimal edge among the
// local outgoing edges of that weight and the children's carried edges of
// that weight.
std::optional<OutSelection> ncand(const Configuration& c, NodeId v, Weight val);

bool reorientation(const Configuration& c, NodeId v);
// Future parent; nullopt when no witness resolves (treated as "keep p").
std::optional<NodeId> new_parent(const Configuration& c, NodeId v);
bool change_newp(const Configuration& c, NodeId v);
std::uint64_t new_dist(const Configuration& c, NodeId v);
bool change_newd(const Configuration& c, NodeId v);
std::vector<NodeId> new_child(const Configuration& c, NodeId v);
bool copy_var(const Configuration& c, NodeId v);

// True when copying (p,d) := (newp,newd) lands or will land consistent:
// the staged distance is finite and either makes v a root, or chains to the
// future parent's current or staged distance.
bool consistent_copy(const Configuration& c, NodeId v);

bool guard_RMin(const Configuration& c, NodeId v);
NodeState rule_RMin(const Configuration& c, NodeId v);
bool guard_RMerge(const Configuration& c, NodeId v);
NodeState rule_RMerge(const Configuration& c, NodeId v);
bool guard_RDist(const Configuration& c, NodeId v);
NodeState rule_RDist(const Configuration& c, NodeId v);
bool guard_REnd(const Configuration& c, NodeId v);
NodeState rule_REnd(const Configuration& c, NodeId v);

// --- recovering -------------------------------------------------------------

// Entry the recovery sweep would select next at v (IE(v)); nullopt when no
// internal edge is available.
std::optional<InSelection> internal_edge_macros(const Configuration& c, NodeId v);
std::vector<InSelection> ie_local(const Configuration& c, NodeId v);
std::vector<InSelection> ie_children(const Configuration& c, NodeId v);
bool select_edge(const Configuration& c, NodeId v);
bool recover(const Configuration& c, NodeId v);
bool guard_RRec(const Configuration& c, NodeId v);
NodeState rule_RRec(const Configuration& c, NodeId v);

// --- scheduling interface -----------------------------------------------------

using EnabledSet = std::map<NodeId, RuleId>;

// Highest-priority enabled rule of one node, if any.
std::optional<RuleId> enabled_rule(const Configuration& c, NodeId v);
EnabledSet enabled(const Configuration& c);

NodeState apply_rule(const Configuration& c, NodeId v, RuleId r);

}  // namespace ssmst
