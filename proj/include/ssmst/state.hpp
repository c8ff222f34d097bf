#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ssmst/graph.hpp"

namespace ssmst {

// Distinguished "infinite" future distance written by the merging rule.
// Strictly greater than every real distance.
inline constexpr std::uint64_t kInfDist = std::numeric_limits<std::uint64_t>::max();

struct LabelPair {
  NodeId anchor = 0;   // root of the heavy path
  std::uint64_t dist = 0;  // hops along that heavy path

  friend bool operator==(const LabelPair&, const LabelPair&) = default;
  friend auto operator<=>(const LabelPair&, const LabelPair&) = default;
};

// NCA label: ordered list of (anchor, dist) pairs. Possibly empty only in
// corrupted states.
struct Label {
  std::vector<LabelPair> pairs;

  static Label root(NodeId id) { return Label{{LabelPair{id, 0}}}; }
  bool empty() const { return pairs.empty(); }
  std::size_t size() const { return pairs.size(); }
  const LabelPair& last() const { return pairs.back(); }

  friend bool operator==(const Label&, const Label&) = default;
};

// Total order on labels: length first, then pairwise lexicographic.
// The absent label (optional without value) sorts below everything.
bool label_less(const Label& a, const Label& b);
bool label_less_opt(const std::optional<Label>& a, const std::optional<Label>& b);

// Bits needed to transmit a label: sum over pairs of bit-length of both
// fields, where bit-length(x) = floor(log2(max(x,1))) + 1.
std::uint64_t label_bits(const Label& l);
std::uint64_t bit_length(std::uint64_t x);

struct SizeInfo {
  std::uint64_t count = 1;              // estimated subtree size
  std::optional<NodeId> heavy_child;    // nil iff believed leaf

  friend bool operator==(const SizeInfo&, const SizeInfo&) = default;
};

// Minimum outgoing edge candidate carried up the fragment: weight plus the
// witness edge endpoints in canonical (min,max) order.
struct OutSelection {
  Weight w = 0;
  NodeId lo = 0;
  NodeId hi = 0;

  friend bool operator==(const OutSelection&, const OutSelection&) = default;
};

// Internal edge carried up during recovery: weight plus the labels of the
// edge extremities.
struct InSelection {
  Weight w = 0;
  Label label_a;
  Label label_b;

  friend bool operator==(const InSelection&, const InSelection&) = default;
};

struct NodeState {
  std::optional<NodeId> p;        // parent pointer
  std::uint64_t d = 0;            // distance to fragment root
  SizeInfo size;
  Label ell;
  std::optional<OutSelection> out;
  std::optional<InSelection> in_sel;
  std::optional<NodeId> newp;     // staged future parent
  std::uint64_t newd = 0;         // staged future distance, may be kInfDist

  friend bool operator==(const NodeState&, const NodeState&) = default;
};

// Total map node -> state over a fixed graph. Value semantics: producing a
// successor copies, never mutates the predecessor.
class Configuration {
public:
  explicit Configuration(GraphPtr g) : graph_(std::move(g)), states_(graph_->node_count()) {}

  const Graph& graph() const { return *graph_; }
  GraphPtr graph_ptr() const { return graph_; }
  std::size_t size() const { return states_.size(); }

  const NodeState& at(NodeId id) const { return states_[graph_->index_of(id)]; }
  NodeState& at(NodeId id) { return states_[graph_->index_of(id)]; }
  const NodeState& at_index(std::size_t i) const { return states_[i]; }
  NodeState& at_index(std::size_t i) { return states_[i]; }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.states_ == b.states_;
  }

private:
  GraphPtr graph_;
  std::vector<NodeState> states_;
};

// Every node its own fragment: p=nil, d=0, size=(1,nil), ell=(id,0).
Configuration singleton_configuration(GraphPtr g);

// Every register drawn uniformly from its bounded domain; deterministic per
// seed. Parents and heavy-child hints only name actual neighbors or nil.
Configuration arbitrary_configuration(GraphPtr g, std::uint64_t seed);

struct ParentForest {
  struct Fragment {
    NodeId root;
    std::vector<NodeId> members;  // sorted
  };
  std::vector<Fragment> fragments;  // sorted by root id
  std::vector<NodeId> cycle_nodes;  // on a parent cycle or hanging from one
};

// Decomposes the parent digraph into rooted fragments and cycle debris.
ParentForest parent_forest(const Configuration& c);

// Flat key-value line per node; nil spelled "-", infinity "inf",
// labels "(a:d)(a:d)...". See README for the full grammar.
std::string serialize_configuration(const Configuration& c);
Configuration deserialize_configuration(GraphPtr g, std::istream& in);
Configuration deserialize_configuration_string(GraphPtr g, const std::string& text);

}  // namespace ssmst
