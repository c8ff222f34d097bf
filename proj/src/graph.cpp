#include "ssmst/graph.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace ssmst {

EdgeKey edge_key(const Edge& e) { return EdgeKey{e.w, std::min(e.u, e.v), std::max(e.u, e.v)}; }

Edge make_edge(NodeId a, NodeId b, Weight w) {
  if (a == b) throw GraphError("self loop at node " + std::to_string(a));
  if (a > b) std::swap(a, b);
  return Edge{a, b, w};
}

Graph::Graph(std::vector<NodeId> nodes, std::vector<Edge> edges) {
  std::sort(nodes.begin(), nodes.end());
  if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end())
    throw GraphError("duplicate node id");
  if (nodes.empty()) throw GraphError("graph has no nodes");
  ids_ = std::move(nodes);
  for (std::size_t i = 0; i < ids_.size(); ++i) id_to_index_[ids_[i]] = i;

  std::set<std::pair<NodeId, NodeId>> seen;
  for (auto& e : edges) {
    if (e.u == e.v) throw GraphError("self loop at node " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.w < 1) throw GraphError("non-positive weight on edge " + std::to_string(e.u) + "-" + std::to_string(e.v));
    if (!has_node(e.u) || !has_node(e.v)) throw GraphError("edge endpoint not a node");
    if (!seen.insert({e.u, e.v}).second)
      throw GraphError("duplicate edge " + std::to_string(e.u) + "-" + std::to_string(e.v));
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return edge_key(a) < edge_key(b); });
  edges_ = std::move(edges);

  adjacency_.resize(ids_.size());
  for (const auto& e : edges_) {
    adjacency_[index_of(e.u)].push_back({e.v, e.w});
    adjacency_[index_of(e.v)].push_back({e.u, e.w});
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());

  // connectivity
  std::vector<char> visited(ids_.size(), 0);
  std::vector<std::size_t> stack{0};
  visited[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    for (const auto& [nbr, w] : adjacency_[i]) {
      (void)w;
      std::size_t j = index_of(nbr);
      if (!visited[j]) {
        visited[j] = 1;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  if (reached != ids_.size()) throw GraphError("graph is disconnected");
}

bool Graph::has_edge(NodeId a, NodeId b) const { return weight_between(a, b).has_value(); }

std::optional<Weight> Graph::weight_between(NodeId a, NodeId b) const {
  if (!has_node(a) || !has_node(b)) return std::nullopt;
  const auto& adj = adjacency_[index_of(a)];
  auto it = std::lower_bound(adj.begin(), adj.end(), std::make_pair(b, Weight{0}));
  if (it != adj.end() && it->first == b) return it->second;
  return std::nullopt;
}

GraphPtr parse_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw GraphError("empty input");
  std::istringstream head(line);
  std::size_t n = 0, m = 0;
  if (!(head >> n >> m)) throw GraphError("line " + std::to_string(lineno) + ": expected \"n m\"");
  if (n == 0) throw GraphError("line " + std::to_string(lineno) + ": graph has no nodes");

  std::vector<Edge> edges;
  std::set<NodeId> node_set;
  for (std::size_t i = 0; i < m; ++i) {
    if (!next_line()) throw GraphError("unexpected end of input: expected " + std::to_string(m) + " edges");
    std::istringstream es(line);
    NodeId u, v;
    long long w;
    if (!(es >> u >> v >> w))
      throw GraphError("line " + std::to_string(lineno) + ": malformed edge line");
    if (w < 1) throw GraphError("line " + std::to_string(lineno) + ": non-positive weight");
    if (u == v) throw GraphError("line " + std::to_string(lineno) + ": self loop");
    for (const auto& e : edges)
      if (std::min(u, v) == e.u && std::max(u, v) == e.v)
        throw GraphError("line " + std::to_string(lineno) + ": duplicate edge");
    edges.push_back(make_edge(u, v, static_cast<Weight>(w)));
    node_set.insert(u);
    node_set.insert(v);
  }
  if (n == 1 && m == 0) node_set.insert(0);
  if (node_set.size() != n)
    throw GraphError("node count mismatch: header says " + std::to_string(n) + ", edges mention " +
                     std::to_string(node_set.size()));
  try {
    return std::make_shared<Graph>(std::vector<NodeId>(node_set.begin(), node_set.end()),
                                   std::move(edges));
  } catch (const GraphError& e) {
    throw GraphError(std::string(e.what()));
  }
}

GraphPtr parse_graph_string(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

GraphPtr load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open " + path);
  return parse_graph(in);
}

std::string format_graph(const Graph& g) {
  std::ostringstream out;
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.w << '\n';
  return out.str();
}

GraphPtr generate_graph(const GenSpec& spec, std::uint64_t seed) {
  if (spec.n == 0) throw GraphError("n = 0");
  if (spec.w_lo < 1 || spec.w_lo > spec.w_hi) throw GraphError("empty weight range");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Weight> weight(spec.w_lo, spec.w_hi);
  std::vector<NodeId> nodes(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) nodes[i] = i;

  auto path_edges = [&] {
    std::vector<Edge> es;
    for (std::size_t i = 0; i + 1 < spec.n; ++i)
      es.push_back(make_edge(i, i + 1, weight(rng)));
    return es;
  };

  switch (spec.model) {
    case GraphModel::Path:
      return std::make_shared<Graph>(nodes, path_edges());
    case GraphModel::Cycle: {
      auto es = path_edges();
      if (spec.n >= 3) es.push_back(make_edge(spec.n - 1, 0, weight(rng)));
      return std::make_shared<Graph>(nodes, std::move(es));
    }
    case GraphModel::Complete: {
      std::vector<Edge> es;
      for (std::size_t i = 0; i < spec.n; ++i)
        for (std::size_t j = i + 1; j < spec.n; ++j) es.push_back(make_edge(i, j, weight(rng)));
      return std::make_shared<Graph>(nodes, std::move(es));
    }
    case GraphModel::Random: {
      std::uniform_real_distribution<double> coin(0.0, 1.0);
      for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<Edge> es;
        for (std::size_t i = 0; i < spec.n; ++i)
          for (std::size_t j = i + 1; j < spec.n; ++j)
            if (coin(rng) < spec.p) es.push_back(make_edge(i, j, weight(rng)));
        try {
          return std::make_shared<Graph>(nodes, std::move(es));
        } catch (const GraphError&) {
          continue;  // disconnected draw, retry
        }
      }
      throw GraphError("random graph: no connected draw after 1000 attempts (p too small?)");
    }
  }
  throw GraphError("unknown model");
}

namespace {
struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};
}  // namespace

MstResult kruskal_mst(const Graph& g) {
  MstResult r;
  UnionFind uf(g.node_count());
  for (const auto& e : g.edges()) {  // already in EdgeKey order
    if (uf.unite(g.index_of(e.u), g.index_of(e.v))) {
      r.edges.push_back(e);
      r.total += e.w;
    }
  }
  return r;
}

}  // namespace ssmst
