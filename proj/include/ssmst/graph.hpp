#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace ssmst {

using NodeId = std::uint64_t;
using Weight = std::uint64_t;  // positive edge cost, >= 1

struct Edge {
  NodeId u;  // canonical: u < v
  NodeId v;
  Weight w;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Total order over edges that stays strict even with duplicate weights:
// (weight, min endpoint, max endpoint).
struct EdgeKey {
  Weight w;
  NodeId lo;
  NodeId hi;

  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

EdgeKey edge_key(const Edge& e);
Edge make_edge(NodeId a, NodeId b, Weight w);

class GraphError : public std::runtime_error {
public:
  explicit GraphError(const std::string& what) : std::runtime_error(what) {}
};

// Immutable undirected weighted connected simple graph.
class Graph {
public:
  // Throws GraphError on self loops, parallel edges, non-positive weights,
  // or a disconnected edge set.
  Graph(std::vector<NodeId> nodes, std::vector<Edge> edges);

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<NodeId>& node_ids() const { return ids_; }  // sorted
  const std::vector<Edge>& edges() const { return edges_; }     // EdgeKey order

  bool has_node(NodeId id) const { return id_to_index_.count(id) != 0; }
  std::size_t index_of(NodeId id) const { return id_to_index_.at(id); }
  NodeId id_at(std::size_t index) const { return ids_[index]; }

  // Neighbors of `id` with the connecting weight, sorted by neighbor id.
  const std::vector<std::pair<NodeId, Weight>>& neighbors(NodeId id) const {
    return adjacency_[index_of(id)];
  }

  bool has_edge(NodeId a, NodeId b) const;
  std::optional<Weight> weight_between(NodeId a, NodeId b) const;

private:
  std::vector<NodeId> ids_;
  std::map<NodeId, std::size_t> id_to_index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<NodeId, Weight>>> adjacency_;
};

using GraphPtr = std::shared_ptr<const Graph>;

// Edge-list format: first line "n m", then m lines "u v w".
// Errors name the offending 1-based line.
GraphPtr parse_graph(std::istream& in);
GraphPtr parse_graph_string(const std::string& text);
GraphPtr load_graph_file(const std::string& path);
std::string format_graph(const Graph& g);

enum class GraphModel { Path, Cycle, Complete, Random };

struct GenSpec {
  GraphModel model = GraphModel::Random;
  std::size_t n = 0;
  double p = 0.5;  // Random only
  Weight w_lo = 1;
  Weight w_hi = 100;
};

// Deterministic for a fixed (spec, seed). Random graphs are redrawn until
// connected. Node ids are 0..n-1.
GraphPtr generate_graph(const GenSpec& spec, std::uint64_t seed);

struct MstResult {
  std::vector<Edge> edges;  // EdgeKey order
  Weight total = 0;
};

// Kruskal with EdgeKey tie-breaking; deterministic edge set.
MstResult kruskal_mst(const Graph& g);

}  // namespace ssmst
