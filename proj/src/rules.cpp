#include "ssmst/rules.hpp"

#include <algorithm>
#include <cassert>

namespace ssmst {

namespace {

std::uint64_t plus1(std::uint64_t d) { return d == kInfDist ? kInfDist : d + 1; }

// Staged distances saturate just above every legitimate value, so follow
// chains through corrupted newp pointers reach a fixpoint instead of
// counting upward forever.
std::uint64_t staged_plus1(const Configuration& c, std::uint64_t d) {
  if (d == kInfDist) return kInfDist;
  std::uint64_t cap = 2 * c.graph().node_count() + 1;
  return std::min(d + 1, cap);
}

// (p, d) register pair matches the staged (newp, newd) pair.
bool completed(const NodeState& s) { return s.p == s.newp && s.d == s.newd; }
bool pending(const NodeState& s) { return !completed(s); }

// Staged registers agree with the committed ones (re-rooted nodes count as
// consistent when both pairs are reset).
bool merge_consistent_staging(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  if (!s.p) return !s.newp && s.d == 0 && s.newd == 0;
  if (s.newp != s.p || s.newd != s.d) return false;
  const NodeState& ps = c.at(*s.p);
  return ps.newd != kInfDist && s.newd == ps.newd + 1;
}

// Order on In entries: weight first, then endpoint labels.
bool in_less(const InSelection& a, const InSelection& b) {
  if (a.w != b.w) return a.w < b.w;
  if (a.label_a != b.label_a) return label_less(a.label_a, b.label_a);
  return label_less(a.label_b, b.label_b);
}

std::optional<Label> in_nca(const InSelection& e) { return nca_decode(e.label_a, e.label_b); }

// Sweep order on entries: nca label first, then weight, then labels.
bool sweep_less(const InSelection& a, const InSelection& b) {
  auto na = in_nca(a), nb = in_nca(b);
  if (na != nb) return label_less_opt(na, nb);
  return in_less(a, b);
}

}  // namespace

const char* rule_name(RuleId r) {
  switch (r) {
    case RuleId::RCorrect: return "RCorrect";
    case RuleId::RSC: return "RSC";
    case RuleId::RLC: return "RLC";
    case RuleId::RMin: return "RMin";
    case RuleId::RMerge: return "RMerge";
    case RuleId::RDist: return "RDist";
    case RuleId::REnd: return "REnd";
    case RuleId::RRec: return "RRec";
  }
  return "?";
}

std::optional<RuleId> rule_from_name(const std::string& name) {
  for (RuleId r : {RuleId::RCorrect, RuleId::RSC, RuleId::RLC, RuleId::RMin, RuleId::RMerge,
                   RuleId::RDist, RuleId::REnd, RuleId::RRec})
    if (name == rule_name(r)) return r;
  return std::nullopt;
}

bool guard_distance(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  if (!s.p) return s.d == 0;
  return s.d == plus1(c.at(*s.p).d) && s.d != kInfDist;
}

bool correctF(const Configuration& c, NodeId v) {
  if (!guard_distance(c, v)) return false;
  auto verdict = predicates(c, v);
  return verdict.sizec && verdict.label_ok;
}

// --- correction ------------------------------------------------------------

namespace {

// A node that has completed its copy and whose staged distance chains onto
// the parent's still-pending copy: its Distance violation is the expected
// transient of a bottom-up merge commit, not corruption.
bool shield_wait(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  if (!s.p || pending(s) || s.newd == kInfDist) return false;
  const NodeState& ps = c.at(*s.p);
  if (!pending(ps) || !ps.out) return false;
  // parent still computing its future distance, or already chained below v's
  return ps.newd == kInfDist || s.newd == ps.newd + 1;
}

// Mid reorientation: the old parent has already adopted v and v's own copy
// (pointing elsewhere) is still staged. The flip resolves when v copies.
bool shield_flip(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  if (!s.p || completed(s) || s.newd == kInfDist) return false;
  if (!s.newp || *s.newp == *s.p) return false;
  if (!consistent_copy(c, v)) return false;  // only a committable flip is protected
  const NodeState& ps = c.at(*s.p);
  return completed(ps) && ps.p == v && ps.newd != kInfDist && ps.newd == s.newd + 1;
}

// A follower keeps its parent and restages only its distance while the
// parent's own wave is live; its staged distance must sit inside the wave's
// progression.
bool shield_follow(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  if (!s.p || completed(s) || s.newp != s.p) return false;
  const NodeState& ps = c.at(*s.p);
  if (!pending(ps) || !ps.out) return false;
  return s.newd == kInfDist || s.newd == staged_plus1(c, ps.newd);
}

bool merge_shield(const Configuration& c, NodeId v) {
  return shield_wait(c, v) || shield_flip(c, v) || shield_follow(c, v);
}

bool live_mutual_fwd(const Configuration& c, NodeId v);

// Staged registers that no live wave justifies: not backed by an own
// selection, not under a live parent wave, not a committable copy, not a
// live handshake. Reaped by the correction rule regardless of labels.
bool stale_staging(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  if (merge_consistent_staging(c, v) || s.out) return false;
  if (s.p) {
    const NodeState& ps = c.at(*s.p);
    if (pending(ps) && ps.out) return false;
  }
  if (live_mutual_fwd(c, v)) return false;
  return !(copy_var(c, v) && consistent_copy(c, v));
}

}  // namespace

bool guard_RCorrect(const Configuration& c, NodeId v) {
  if (!guard_distance(c, v) && !merge_shield(c, v)) return true;
  return stale_staging(c, v);
}

NodeState rule_RCorrect(const Configuration& c, NodeId v) {
  NodeState s = c.at(v);
  if (!guard_distance(c, v) && !merge_shield(c, v)) {
    s.out.reset();
    s.in_sel.reset();
    if (!s.p && s.d != 0) {
      s.d = 0;
    } else if (s.p) {
      std::uint64_t pd = c.at(*s.p).d;
      if (plus1(pd) < s.d) {
        s.d = pd + 1;
      } else if (pd >= s.d) {
        s.p.reset();
        s.ell = Label::root(v);
        s.d = 0;
      }
    }
  }
  // Drop any staged merge state; a corrected node starts over.
  s.newp = s.p;
  s.newd = s.d;
  return s;
}

// --- labeling composition ---------------------------------------------------

bool guard_RSC_mst(const Configuration& c, NodeId v) {
  return guard_distance(c, v) && guard_RSC(c, v);
}

bool guard_RLC_mst(const Configuration& c, NodeId v) {
  return guard_distance(c, v) && guard_RLC(c, v);
}

// --- merging ----------------------------------------------------------------

std::vector<Edge> outgoing_edges(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  std::vector<Edge> out;
  for (const auto& [u, w] : c.graph().neighbors(v)) {
    if (s.p && *s.p == u) continue;
    const NodeState& su = c.at(u);
    if (su.p && *su.p == v) continue;  // child
    if (!nca_decode(su.ell, s.ell)) out.push_back(make_edge(u, v, w));
  }
  std::sort(out.begin(), out.end(),
            [](const Edge& a, const Edge& b) { return edge_key(a) < edge_key(b); });
  return out;
}

std::optional<Weight> cand_local(const Configuration& c, NodeId v) {
  auto oe = outgoing_edges(c, v);
  if (oe.empty()) return std::nullopt;
  return oe.front().w;  // EdgeKey order is weight-first
}

std::optional<Weight> cand_children(const Configuration& c, NodeId v) {
  std::optional<Weight> best;
  for (NodeId u : children(c, v)) {
    const auto& out = c.at(u).out;
    if (out && (!best || out->w < *best)) best = out->w;
  }
  return best;
}

std::optional<Weight> candidate(const Configuration& c, NodeId v) {
  auto a = cand_local(c, v), b = cand_children(c, v);
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

std::optional<OutSelection> ncand(const Configuration& c, NodeId v, Weight val) {
  std::optional<OutSelection> best;
  auto consider = [&](NodeId lo, NodeId hi) {
    if (lo > hi) std::swap(lo, hi);
    if (!best || EdgeKey{val, lo, hi} < EdgeKey{best->w, best->lo, best->hi})
      best = OutSelection{val, lo, hi};
  };
  for (const Edge& e : outgoing_edges(c, v))
    if (e.w == val) consider(e.u, e.v);
  for (NodeId u : children(c, v)) {
    const auto& out = c.at(u).out;
    if (out && out->w == val) consider(out->lo, out->hi);
  }
  return best;
}

bool live_mutual(const Configuration& c, NodeId v);

bool reorientation(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  if (!s.p) return true;
  if (!s.out) return false;
  const NodeState& ps = c.at(*s.p);
  return ps.out == s.out && ps.newp && *ps.newp == v;
}

std::optional<NodeId> new_parent(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  if (s.out) {
    auto cl = cand_local(c, v);
    if (cl && *cl == s.out->w) {
      for (const Edge& e : outgoing_edges(c, v)) {
        if (e.u == s.out->lo && e.v == s.out->hi) {
          return e.u == v ? e.v : e.u;  // the endpoint across the edge
        }
      }
    }
    std::optional<NodeId> best;
    for (NodeId u : children(c, v))
      if (c.at(u).out == s.out && (!best || u < *best)) best = u;
    if (best) return best;
  }
  return std::nullopt;
}

bool change_newp(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  if (reorientation(c, v)) {
    // an unresolvable witness cannot demand a change
    auto np = new_parent(c, v);
    if (np && s.newp != np) return true;
  }
  if (s.p && !live_mutual(c, v)) {  // a live handshake owns the staging
    const NodeState& ps = c.at(*s.p);
    if (ps.out && ps.out != s.out && s.newp != s.p) return true;
  }
  return false;
}

// Mutual handshake between v and newp_v that the merge machinery may act
// on: both endpoints staged each other AND either the shared selected edge
// still backs it or the partner has already committed its copy onto v.
bool live_mutual(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  if (!s.newp) return false;
  const NodeState& ns = c.at(*s.newp);
  if (!ns.newp || *ns.newp != v) return false;
  NodeId lo = std::min(v, *s.newp), hi = std::max(v, *s.newp);
  bool backing = s.out && ns.out && *ns.out == *s.out && s.out->lo == lo && s.out->hi == hi;
  bool partner_done = s.out && ns.p && *ns.p == v && ns.d == ns.newd;
  return backing || partner_done;
}

namespace {
bool live_mutual_fwd(const Configuration& c, NodeId v) { return live_mutual(c, v); }
}  // namespace

std::uint64_t new_dist(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  if (!s.newp) return 0;
  const NodeState& ns = c.at(*s.newp);
  if (live_mutual(c, v)) {
    // partner already committed onto v: v roots the pair no matter the ids
    if (ns.p && *ns.p == v && ns.d == ns.newd) return 0;
    return (*s.newp > v) ? 0 : 1;
  }
  return staged_plus1(c, ns.newd);
}

bool change_newd(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  if (s.newp) {
    const NodeState& ns = c.at(*s.newp);
    // merge-edge endpoints agree on who roots the new fragment; this case
    // owns newd for the pair, even once the partner has copied
    if (live_mutual(c, v)) return s.newd != new_dist(c, v);
    // reoriented path: my future parent is my current child, both still
    // carrying the selection that staged the flip
    if (ns.p && *ns.p == v && ns.out && s.out == ns.out)
      return s.newd != staged_plus1(c, ns.newd);
    // an infinite staged distance whose future parent has resolved must
    // resolve too, or it wedges every copy waiting on this node
    if (s.newd == kInfDist && s.newp == s.p && ns.newd != kInfDist) return true;
  }
  if (s.p) {
    const NodeState& ps = c.at(*s.p);
    if (ps.newd != ps.d && s.newd != staged_plus1(c, ps.newd)) return true;
  }
  // live-backed staging whose distance tracks nothing above: keep it glued
  // to the future parent so the commit can eventually clear
  if (pending(s) && s.out && s.newp && s.newd != new_dist(c, v)) return true;
  return false;
}

std::vector<NodeId> new_child(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  std::vector<NodeId> out;
  bool mutual = live_mutual(c, v);
  for (const auto& [u, w] : c.graph().neighbors(v)) {
    (void)w;
    const NodeState& su = c.at(u);
    bool is_partner = mutual && *s.newp == u;
    // in a mutual handshake only the future root waits for its partner
    bool partner_wins = is_partner && u < v;
    bool is_child_or_parent = (su.p && *su.p == v) || (s.p && *s.p == u);
    bool first = is_child_or_parent && su.newp && *su.newp == v && !partner_wins;
    bool second = is_partner && *s.newp > v;
    if (first || second) out.push_back(u);
  }
  return out;
}

bool copy_var(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  if (!pending(s)) return false;
  for (NodeId u : new_child(c, v))
    if (pending(c.at(u))) return false;
  return true;
}

bool consistent_copy(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  if (s.newd == kInfDist) return false;
  if (s.newd == 0) return true;
  if (!s.newp) return false;
  const NodeState& ns = c.at(*s.newp);
  if (ns.d == s.newd - 1) return true;
  return pending(ns) && ns.newd == s.newd - 1;
}

bool guard_RMin(const Configuration& c, NodeId v) {
  if (!correctF(c, v)) return false;
  auto cand = candidate(c, v);
  const auto& out = c.at(v).out;
  if (!cand) return out.has_value();  // stale selection with no candidate left
  // the witness edge matters, not just the weight: fragments can only agree
  // on a shared minimum outgoing edge if every hop carries the EdgeKey-
  // minimal witness
  return out != ncand(c, v, *cand);
}

NodeState rule_RMin(const Configuration& c, NodeId v) {
  NodeState s = c.at(v);
  auto cand = candidate(c, v);
  if (!cand) {
    s.out.reset();
    return s;
  }
  s.out = ncand(c, v, *cand);
  assert(s.out);
  return s;
}

bool guard_RMerge(const Configuration& c, NodeId v) {
  if (!correctF(c, v)) return false;
  const auto& out = c.at(v).out;
  auto cand = candidate(c, v);
  if (!out || !cand || out->w != *cand) return false;
  return change_newp(c, v);
}

NodeState rule_RMerge(const Configuration& c, NodeId v) {
  NodeState s = c.at(v);
  s.newd = kInfDist;
  if (reorientation(c, v)) {
    auto np = new_parent(c, v);
    s.newp = np ? np : s.p;
  } else {
    s.newp = s.p;
  }
  return s;
}

bool guard_RDist(const Configuration& c, NodeId v) {
  // Distance suffices: the rule reads no labels, and gating it on CorrectF
  // wedges cycle-bound states whose labels can never converge. Nodes inside
  // a recognized commit window restage their distance despite the transient
  // Distance violation, or the window cannot drain.
  if (!guard_distance(c, v) && !merge_shield(c, v)) return false;
  return !change_newp(c, v) && change_newd(c, v);
}

NodeState rule_RDist(const Configuration& c, NodeId v) {
  NodeState s = c.at(v);
  s.newd = new_dist(c, v);
  return s;
}

bool guard_REnd(const Configuration& c, NodeId v) {
  // a root-making commit is always handshake-driven: it needs the selection
  // that staged it to still stand; chain followers commit bare
  if (c.at(v).newd == 0 && !c.at(v).out) return false;
  return !change_newp(c, v) && !change_newd(c, v) && copy_var(c, v) && consistent_copy(c, v);
}

NodeState rule_REnd(const Configuration& c, NodeId v) {
  NodeState s = c.at(v);
  s.p = s.newp;
  s.d = s.newd;
  s.out.reset();
  if (s.newd == 0) {
    s.p.reset();
    s.newp.reset();
  }
  return s;
}

// --- recovering -------------------------------------------------------------

namespace {

// nca label order with "v or one of its ancestors" meaning: not above the
// node's own label under the length-then-lexicographic order.
bool nca_at_or_above(const std::optional<Label>& nca, const Label& lv) {
  return nca && !label_less(lv, *nca);
}

}  // namespace

std::vector<InSelection> ie_local(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  // candidate internal edges adjacent to v, minimal weight per common ancestor
  std::map<std::vector<LabelPair>, InSelection> best_per_ca;
  for (const auto& [u, w] : c.graph().neighbors(v)) {
    if (s.p && *s.p == u) continue;
    const NodeState& su = c.at(u);
    if (su.p && *su.p == v) continue;
    auto ca = nca_decode(su.ell, s.ell);
    if (!nca_at_or_above(ca, s.ell)) continue;
    InSelection e{w, su.ell, s.ell};
    auto it = best_per_ca.find(ca->pairs);
    if (it == best_per_ca.end() || in_less(e, it->second)) best_per_ca[ca->pairs] = e;
  }
  std::vector<InSelection> out;
  for (auto& [ca, e] : best_per_ca) out.push_back(e);
  return out;
}

bool in_entry_fresh(const Configuration& c, NodeId v);

std::vector<InSelection> ie_children(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  std::vector<InSelection> out;
  for (NodeId u : children(c, v)) {
    const auto& in = c.at(u).in_sel;
    if (!in) continue;
    auto ca = in_nca(*in);
    if (nca_at_or_above(ca, s.ell)) out.push_back(*in);
  }
  return out;
}

std::optional<InSelection> internal_edge_macros(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  auto pool = ie_local(c, v);
  auto from_children = ie_children(c, v);
  pool.insert(pool.end(), from_children.begin(), from_children.end());

  auto min_above = [&](const std::optional<Label>& ca) -> std::optional<InSelection> {
    std::optional<InSelection> best;
    for (const auto& e : pool) {
      auto nca = in_nca(e);
      if (!nca) continue;
      if (ca && !label_less_opt(ca, nca)) continue;  // need nca strictly greater
      if (!best || sweep_less(e, *best)) best = e;
    }
    return best;
  };

  std::optional<Label> cur;
  if (s.in_sel && in_entry_fresh(c, v)) cur = in_nca(*s.in_sel);
  auto next = min_above(cur);
  if (next) return next;
  return min_above(std::nullopt);  // wrap the cyclic sweep
}

// The held entry's common ancestor must still be an ancestor of v under the
// current labels; relabeling leaves old entries undecodable.
bool in_entry_fresh(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  if (!s.in_sel) return false;
  auto cn = in_nca(*s.in_sel);
  if (!cn) return false;
  auto anc = nca_decode(*cn, s.ell);
  return anc && *anc == *cn;
}

bool select_edge(const Configuration& c, NodeId v) {
  const NodeState& s = c.at(v);
  if (!s.in_sel) return true;          // nothing held: free to select
  if (!in_entry_fresh(c, v)) return true;  // stale debris: free to replace
  auto cur_nca = in_nca(*s.in_sel);
  bool nca_is_self = cur_nca && *cur_nca == s.ell;

  auto locals = ie_local(c, v);
  bool in_locals = std::find(locals.begin(), locals.end(), *s.in_sel) != locals.end();
  bool end_forward = (!s.p || nca_is_self) && in_locals;

  // note: no "still offered by a child" veto here; a single-entry subtree
  // wraps its sweep back to the same entry forever, and vetoing on that
  // would freeze the pipeline above it
  bool forwarded_up = false;
  if (s.p) {
    const auto& pin = c.at(*s.p).in_sel;
    forwarded_up = pin && *pin == *s.in_sel;
  }
  bool forwarded = nca_is_self || forwarded_up;

  bool better_parent = false;
  if (s.p && !nca_is_self) {
    const auto& pin = c.at(*s.p).in_sel;
    if (pin && in_nca(*pin) == cur_nca && in_less(*pin, *s.in_sel)) better_parent = true;
  }
  return end_forward || forwarded || better_parent;
}

bool recover(const Configuration& c, NodeId v) {
  return merge_consistent_staging(c, v) && !candidate(c, v) && select_edge(c, v);
}

bool guard_RRec(const Configuration& c, NodeId v) {
  return correctF(c, v) && recover(c, v);
}

NodeState rule_RRec(const Configuration& c, NodeId v) {
  NodeState s = c.at(v);
  auto ie = internal_edge_macros(c, v);
  if (ie)
    s.in_sel = *ie;
  else
    s.in_sel.reset();
  if (s.in_sel && s.p) {
    auto ca = in_nca(*s.in_sel);
    Weight parent_w = *c.graph().weight_between(v, *s.p);
    if ((!ca || *ca != s.ell) && parent_w > s.in_sel->w) {
      // red rule: the tree edge to the parent is heavier than an internal
      // edge on its fundamental cycle
      s.p.reset();
      s.d = 0;
      s.ell = Label::root(v);
      s.newp.reset();
      s.newd = 0;
    }
  }
  return s;
}

// --- scheduling interface -----------------------------------------------------

std::optional<RuleId> enabled_rule(const Configuration& c, NodeId v) {
  // A rule whose action would leave the node's state unchanged is not
  // enabled: an idempotent firing makes no progress and, left in place,
  // starves every lower-priority rule at the node.
  auto productive = [&](RuleId r) { return !(apply_rule(c, v, r) == c.at(v)); };
  if (guard_RCorrect(c, v) && productive(RuleId::RCorrect)) return RuleId::RCorrect;
  if (guard_RSC_mst(c, v) && productive(RuleId::RSC)) return RuleId::RSC;
  if (guard_RLC_mst(c, v) && productive(RuleId::RLC)) return RuleId::RLC;
  if (guard_RMin(c, v) && productive(RuleId::RMin)) return RuleId::RMin;
  if (guard_RMerge(c, v) && productive(RuleId::RMerge)) return RuleId::RMerge;
  if (guard_RDist(c, v) && productive(RuleId::RDist)) return RuleId::RDist;
  if (guard_REnd(c, v) && productive(RuleId::REnd)) return RuleId::REnd;
  if (guard_RRec(c, v) && productive(RuleId::RRec)) return RuleId::RRec;
  return std::nullopt;
}

EnabledSet enabled(const Configuration& c) {
  EnabledSet out;
  for (NodeId id : c.graph().node_ids())
    if (auto r = enabled_rule(c, id)) out[id] = *r;
  return out;
}

NodeState apply_rule(const Configuration& c, NodeId v, RuleId r) {
  switch (r) {
    case RuleId::RCorrect: return rule_RCorrect(c, v);
    case RuleId::RSC: return act_RSC(c, v);
    case RuleId::RLC: return act_RLC(c, v);
    case RuleId::RMin: return rule_RMin(c, v);
    case RuleId::RMerge: return rule_RMerge(c, v);
    case RuleId::RDist: return rule_RDist(c, v);
    case RuleId::REnd: return rule_REnd(c, v);
    case RuleId::RRec: return rule_RRec(c, v);
  }
  return c.at(v);
}

}  // namespace ssmst
