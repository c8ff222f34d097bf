#include "ssmst/labeling.hpp"

#include <algorithm>

namespace ssmst {

std::vector<NodeId> children(const Configuration& c, NodeId v) {
  std::vector<NodeId> out;
  for (const auto& [u, w] : c.graph().neighbors(v)) {
    (void)w;
    const auto& su = c.at(u);
    if (su.p && *su.p == v) out.push_back(u);
  }
  return out;  // neighbors() is sorted, so this is too
}

SizeInfo nbr_nd_s(const Configuration& c, NodeId v) {
  auto kids = children(c, v);
  SizeInfo r;
  r.count = 1;
  std::optional<NodeId> heavy;
  std::uint64_t best = 0;
  for (NodeId u : kids) {
    std::uint64_t su = c.at(u).size.count;
    r.count += su;
    // child of maximal size; ties broken to the highest id
    if (!heavy || su > best || (su == best && u > *heavy)) {
      best = su;
      heavy = u;
    }
  }
  r.heavy_child = heavy;
  return r;
}

namespace {

bool prefix_equal(const Label& a, const Label& b) {
  // a and b with their last pairs removed
  if (a.empty() || b.empty()) return false;
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    if (a.pairs[i] != b.pairs[i]) return false;
  return true;
}

}  // namespace

LabelingVerdict predicates(const Configuration& c, NodeId v) {
  LabelingVerdict out;
  const NodeState& s = c.at(v);
  auto kids = children(c, v);

  out.leaf = kids.empty() && s.size == SizeInfo{1, std::nullopt};
  out.sizec = out.leaf || (!kids.empty() && s.size == nbr_nd_s(c, v));
  out.label_r = !s.p && s.ell == Label::root(v);

  if (s.p) {
    const NodeState& ps = c.at(*s.p);
    // Heavy: designated by the parent, strictly smaller subtree, same list
    // minus the last pair, and the last pair continues the parent's heavy
    // path (same anchor, distance one more).
    out.heavy = ps.size.heavy_child && *ps.size.heavy_child == v &&
                s.size.count < ps.size.count && prefix_equal(ps.ell, s.ell) &&
                !ps.ell.empty() && !s.ell.empty() &&
                s.ell.last().anchor == ps.ell.last().anchor &&
                ps.ell.last().dist + 1 == s.ell.last().dist;
    // Light: not the heavy child, at most half the parent's subtree, label
    // is the parent's label extended with (id, 0).
    bool not_heavy_child = !(ps.size.heavy_child && *ps.size.heavy_child == v);
    bool half = 2 * s.size.count <= ps.size.count;
    bool extended = s.ell.size() == ps.ell.size() + 1 &&
                    std::equal(ps.ell.pairs.begin(), ps.ell.pairs.end(), s.ell.pairs.begin()) &&
                    s.ell.last() == LabelPair{v, 0};
    out.light = not_heavy_child && half && extended;
    out.label_nd = out.heavy || out.light;
  }
  out.label_ok = out.label_r || out.label_nd;
  return out;
}

bool guard_RSC(const Configuration& c, NodeId v) { return !predicates(c, v).sizec; }

NodeState act_RSC(const Configuration& c, NodeId v) {
  NodeState s = c.at(v);
  if (children(c, v).empty())
    s.size = SizeInfo{1, std::nullopt};
  else
    s.size = nbr_nd_s(c, v);
  return s;
}

bool guard_RLC(const Configuration& c, NodeId v) {
  auto verdict = predicates(c, v);
  return verdict.sizec && !verdict.label_ok;
}

NodeState act_RLC(const Configuration& c, NodeId v) {
  NodeState s = c.at(v);
  if (!s.p) {
    s.ell = Label::root(v);  // corrupted root label
    return s;
  }
  const NodeState& ps = c.at(*s.p);
  if (ps.size.heavy_child && *ps.size.heavy_child == v) {
    s.ell = ps.ell;
    if (s.ell.empty()) s.ell = Label::root(*s.p);  // defensive: corrupted parent label
    s.ell.pairs.back().dist += 1;
  } else {
    s.ell = ps.ell;
    s.ell.pairs.push_back({v, 0});
  }
  return s;
}

std::optional<Label> nca_decode(const Label& lu, const Label& lv) {
  std::size_t common = 0;
  while (common < lu.size() && common < lv.size() && lu.pairs[common] == lv.pairs[common])
    ++common;
  const bool ru_empty = common == lu.size();
  const bool rv_empty = common == lv.size();
  if (ru_empty && rv_empty) return lu;  // identical labels
  if (ru_empty) return lu;              // u is the ancestor
  if (rv_empty) return lv;              // v is the ancestor
  const LabelPair& a = lu.pairs[common];
  const LabelPair& b = lv.pairs[common];
  Label out;
  out.pairs.assign(lu.pairs.begin(), lu.pairs.begin() + common);
  if (a.anchor == b.anchor) {
    // both sit on (or below) the same heavy path: the shallower entry point
    out.pairs.push_back({a.anchor, std::min(a.dist, b.dist)});
    return out;
  }
  // residual anchors differ: light branches out of the same node when a
  // common prefix exists, otherwise distinct fragments
  if (common > 0) return out;
  return std::nullopt;
}

}  // namespace ssmst
