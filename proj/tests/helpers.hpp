#pragma once

// Shared fixtures for the unit and acceptance suites.

#include <map>
#include <memory>
#include <random>
#include <set>
#include <vector>

#include "ssmst/labeling.hpp"
#include "ssmst/state.hpp"

namespace ssmst::testing {

// Unit-weight graph over the given edges; node set derived from the edges.
inline GraphPtr tree_graph(const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::set<NodeId> nodes;
  std::vector<Edge> es;
  for (auto [a, b] : edges) {
    nodes.insert(a);
    nodes.insert(b);
    es.push_back(make_edge(a, b, 1));
  }
  return std::make_shared<Graph>(std::vector<NodeId>(nodes.begin(), nodes.end()), es);
}

// Configuration whose parent pointers follow the given rooted tree and whose
// other registers are fresh; distances are made consistent so only the
// labeling rules have work to do.
inline Configuration tree_configuration(GraphPtr g, const std::map<NodeId, NodeId>& parent_of) {
  Configuration c = singleton_configuration(g);
  for (auto [child, parent] : parent_of) {
    c.at(child).p = parent;
    c.at(child).newp = parent;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId v : g->node_ids()) {
      auto& s = c.at(v);
      if (s.p) {
        std::uint64_t want = c.at(*s.p).d + 1;
        if (s.d != want) {
          s.d = want;
          s.newd = want;
          changed = true;
        }
      }
    }
  }
  return c;
}

// Runs R_SC / R_LC alone to quiescence. Returns rounds taken, or ~0 if the
// labeling failed to settle inside the iteration budget.
inline std::uint64_t settle_labels(Configuration& c) {
  for (std::uint64_t iter = 0; iter < 10000; ++iter) {
    bool any = false;
    std::vector<std::pair<NodeId, NodeState>> writes;
    for (NodeId v : c.graph().node_ids()) {
      if (guard_RSC(c, v))
        writes.push_back({v, act_RSC(c, v)});
      else if (guard_RLC(c, v))
        writes.push_back({v, act_RLC(c, v)});
    }
    any = !writes.empty();
    for (auto& [v, s] : writes) c.at(v) = std::move(s);
    if (!any) return iter;
  }
  return ~std::uint64_t{0};
}

inline Label mk_label(std::initializer_list<std::pair<NodeId, std::uint64_t>> pairs) {
  Label l;
  for (auto [a, d] : pairs) l.pairs.push_back({a, d});
  return l;
}

// Aligns the staged registers with the committed ones, as a completed merge
// leaves them.
inline void stage_consistent(Configuration& c) {
  for (NodeId v : c.graph().node_ids()) {
    c.at(v).newp = c.at(v).p;
    c.at(v).newd = c.at(v).d;
  }
}

// The worked-example tree: root 0 with heavy spine 0-1-5-6-7-8-11 and the
// light branch 2-3-4-10 carrying light leaf 9 under 3.
inline GraphPtr example_tree() {
  return tree_graph({{0, 1}, {0, 2}, {2, 3}, {3, 4}, {3, 9}, {4, 10},
                     {1, 5}, {5, 6}, {6, 7}, {7, 8}, {8, 11}});
}

inline std::map<NodeId, NodeId> example_parents() {
  return {{1, 0}, {2, 0}, {3, 2}, {4, 3}, {9, 3}, {10, 4},
          {5, 1}, {6, 5}, {7, 6}, {8, 7}, {11, 8}};
}

// Uniform random attachment tree on nodes 0..n-1.
inline std::pair<GraphPtr, std::map<NodeId, NodeId>> random_tree(std::size_t n,
                                                                 std::mt19937_64& rng) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::map<NodeId, NodeId> parents;
  for (std::size_t v = 1; v < n; ++v) {
    NodeId p = std::uniform_int_distribution<NodeId>(0, v - 1)(rng);
    edges.push_back({p, v});
    parents[v] = p;
  }
  if (n == 1) {
    std::vector<NodeId> single{0};
    return {std::make_shared<Graph>(single, std::vector<Edge>{}), parents};
  }
  return {tree_graph(edges), parents};
}

}  // namespace ssmst::testing
