#include "ssmst/oracles.hpp"

#include <algorithm>
#include <map>

namespace ssmst {

std::uint64_t s_value(const Configuration& c, NodeId v) {
  std::uint64_t sum = 0;
  for (NodeId u : children(c, v)) sum += c.at(u).size.count;
  std::uint64_t mine = c.at(v).size.count;
  std::uint64_t target = sum + 1;
  return mine > target ? mine - target : target - mine;
}

namespace {

// depth of every node measured from its fragment root; nullopt if on or
// hanging from a parent cycle
std::vector<std::optional<std::uint64_t>> depths(const Configuration& c, bool& has_cycle) {
  const Graph& g = c.graph();
  auto forest = parent_forest(c);
  has_cycle = !forest.cycle_nodes.empty();
  std::vector<std::optional<std::uint64_t>> depth(g.node_count());
  for (const auto& frag : forest.fragments) {
    // BFS down from the root via children pointers
    std::vector<std::pair<NodeId, std::uint64_t>> queue{{frag.root, 0}};
    std::size_t head = 0;
    while (head < queue.size()) {
      auto [v, dv] = queue[head++];
      depth[g.index_of(v)] = dv;
      for (NodeId u : children(c, v)) queue.push_back({u, dv + 1});
    }
  }
  return depth;
}

}  // namespace

PotentialResult phi(const Configuration& c) {
  PotentialResult r;
  bool cyc = false;
  auto depth = depths(c, cyc);
  r.defined = !cyc;
  const std::uint64_t n = c.graph().node_count();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!depth[i]) continue;
    NodeId id = c.graph().id_at(i);
    if (s_value(c, id) != 0) r.value.add(BigUint::pow(n + 1, *depth[i]));
  }
  return r;
}

std::uint64_t label_discrepancy(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  auto diff = [](std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; };
  // pairwise |a0-b0|+|a1-b1| over the first `count` pairs, missing pairs read
  // as (0,0)
  auto pairs_delta = [&](const std::vector<LabelPair>& a, const std::vector<LabelPair>& b,
                         std::size_t count) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < count; ++i) {
      LabelPair pa = i < a.size() ? a[i] : LabelPair{0, 0};
      LabelPair pb = i < b.size() ? b[i] : LabelPair{0, 0};
      total += diff(pa.anchor, pb.anchor) + diff(pa.dist, pb.dist);
    }
    return total;
  };

  std::uint64_t out = s_value(c, v);
  if (!s.p) {
    out += diff(s.ell.size(), 1);
    out += pairs_delta(s.ell.pairs, {LabelPair{v, 0}}, std::max<std::size_t>(s.ell.size(), 1));
    return out;
  }
  const NodeState& ps = c.at(*s.p);
  bool heavy_designated = ps.size.heavy_child && *ps.size.heavy_child == v;
  if (heavy_designated) {
    out += diff(s.ell.size(), ps.ell.size());
    std::vector<LabelPair> mine(s.ell.pairs.begin(),
                                s.ell.pairs.begin() + (s.ell.empty() ? 0 : s.ell.size() - 1));
    std::vector<LabelPair> theirs(ps.ell.pairs.begin(),
                                  ps.ell.pairs.begin() + (ps.ell.empty() ? 0 : ps.ell.size() - 1));
    out += pairs_delta(mine, theirs, std::max(mine.size(), theirs.size()));
    LabelPair lv = s.ell.empty() ? LabelPair{0, 0} : s.ell.last();
    LabelPair lp = ps.ell.empty() ? LabelPair{0, 0} : ps.ell.last();
    out += diff(lv.anchor, lp.anchor);
    out += diff(lv.dist, lp.dist + 1);
  } else {
    out += diff(s.ell.size(), ps.ell.size() + 1);
    std::vector<LabelPair> mine(s.ell.pairs.begin(),
                                s.ell.pairs.begin() + (s.ell.empty() ? 0 : s.ell.size() - 1));
    out += pairs_delta(mine, ps.ell.pairs, std::max(mine.size(), ps.ell.pairs.size()));
    LabelPair lv = s.ell.empty() ? LabelPair{0, 0} : s.ell.last();
    out += diff(lv.anchor, v) + lv.dist;
  }
  return out;
}

PotentialResult lambda(const Configuration& c) {
  PotentialResult r;
  bool cyc = false;
  auto depth = depths(c, cyc);
  r.defined = !cyc;
  const std::uint64_t n = c.graph().node_count();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!depth[i]) continue;
    NodeId id = c.graph().id_at(i);
    if (label_discrepancy(c, id) != 0) r.value.add(BigUint::pow(n + 1, n + 1 - *depth[i]));
  }
  return r;
}

std::vector<FragmentClass> classify_fragments(const Configuration& c) {
  auto forest = parent_forest(c);
  std::vector<FragmentClass> out;
  for (const auto& frag : forest.fragments) {
    FragmentClass fc;
    fc.root = frag.root;
    fc.members = frag.members;
    fc.f1 = std::all_of(frag.members.begin(), frag.members.end(),
                        [&](NodeId v) { return correctF(c, v); });
    fc.f2 = fc.f1 && std::all_of(frag.members.begin(), frag.members.end(), [&](NodeId v) {
              auto cand = candidate(c, v);
              const auto& o = c.at(v).out;
              return cand && o && o->w == *cand;
            });
    fc.f3 = fc.f2 && std::none_of(frag.members.begin(), frag.members.end(),
                                  [&](NodeId v) { return change_newp(c, v); });
    fc.f4 = fc.f3 && std::none_of(frag.members.begin(), frag.members.end(),
                                  [&](NodeId v) { return change_newd(c, v); });
    fc.f5 = fc.f4 && std::none_of(frag.members.begin(), frag.members.end(),
                                  [&](NodeId v) { return copy_var(c, v); });
    out.push_back(std::move(fc));
  }
  return out;
}

std::vector<NodeId> RootedTree::root_path(NodeId v) const {
  std::vector<NodeId> path{v};
  std::size_t guard = graph->node_count() + 1;
  while (guard--) {
    auto p = parent_of(path.back());
    if (!p) return path;
    path.push_back(*p);
  }
  return {};  // cycle: no root reachable
}

std::optional<NodeId> brute_force_lca(const RootedTree& t, NodeId u, NodeId v) {
  auto pu = t.root_path(u);
  auto pv = t.root_path(v);
  if (pu.empty() || pv.empty() || pu.back() != pv.back()) return std::nullopt;
  std::optional<NodeId> meet;
  auto iu = pu.rbegin();
  auto iv = pv.rbegin();
  while (iu != pu.rend() && iv != pv.rend() && *iu == *iv) {
    meet = *iu;
    ++iu;
    ++iv;
  }
  return meet;
}

RootedTree tree_of_configuration(const Configuration& c) {
  RootedTree t;
  t.graph = c.graph_ptr();
  t.parent.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) t.parent[i] = c.at_index(i).p;
  return t;
}

MstCheck check_mst(const Configuration& c) {
  MstCheck out;
  const Graph& g = c.graph();
  out.oracle_weight = kruskal_mst(g).total;

  auto forest = parent_forest(c);
  if (!forest.cycle_nodes.empty()) {
    out.verdict = MstVerdict::NotTree;
    return out;
  }
  if (forest.fragments.size() != 1) {
    out.verdict = MstVerdict::NotSpanning;
    return out;
  }
  // every parent edge must exist in the graph
  Weight total = 0;
  std::size_t edges = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& s = c.at_index(i);
    if (!s.p) continue;
    auto w = g.weight_between(g.id_at(i), *s.p);
    if (!w) {
      out.verdict = MstVerdict::NotTree;
      return out;
    }
    total += *w;
    ++edges;
  }
  if (edges != g.node_count() - 1) {
    out.verdict = MstVerdict::NotTree;
    return out;
  }
  out.tree_weight = total;
  if (total != out.oracle_weight) {
    out.verdict = MstVerdict::NotMinimal;
    out.gap = total - out.oracle_weight;
    return out;
  }
  out.verdict = MstVerdict::Legitimate;
  return out;
}

std::optional<Edge> path_max_oracle(const RootedTree& t, NodeId u, NodeId v) {
  if (u == v) return std::nullopt;
  auto pu = t.root_path(u);
  auto pv = t.root_path(v);
  if (pu.empty() || pv.empty() || pu.back() != pv.back()) return std::nullopt;
  // trim the shared suffix above the meeting point
  auto iu = pu.rbegin();
  auto iv = pv.rbegin();
  NodeId meet = pu.back();
  while (iu != pu.rend() && iv != pv.rend() && *iu == *iv) {
    meet = *iu;
    ++iu;
    ++iv;
  }
  const Graph& g = *t.graph;
  std::optional<Edge> best;
  auto feed = [&](const std::vector<NodeId>& path) {
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (path[i] == meet) break;
      NodeId a = path[i];
      NodeId b = *t.parent_of(a);
      Edge e = make_edge(a, b, *g.weight_between(a, b));
      if (!best || edge_key(*best) < edge_key(e)) best = e;
    }
  };
  feed(pu);
  feed(pv);
  return best;
}

}  // namespace ssmst
