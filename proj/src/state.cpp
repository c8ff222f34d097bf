#include "ssmst/state.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace ssmst {

bool label_less(const Label& a, const Label& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.pairs < b.pairs;
}

bool label_less_opt(const std::optional<Label>& a, const std::optional<Label>& b) {
  if (!a) return b.has_value();
  if (!b) return false;
  return label_less(*a, *b);
}

std::uint64_t bit_length(std::uint64_t x) {
  if (x == 0) x = 1;
  std::uint64_t bits = 0;
  while (x) {
    ++bits;
    x >>= 1;
  }
  return bits;
}

std::uint64_t label_bits(const Label& l) {
  std::uint64_t total = 0;
  for (const auto& p : l.pairs) total += bit_length(p.anchor) + bit_length(p.dist);
  return total;
}

Configuration singleton_configuration(GraphPtr g) {
  Configuration c(std::move(g));
  for (std::size_t i = 0; i < c.size(); ++i) {
    NodeId id = c.graph().id_at(i);
    NodeState& s = c.at_index(i);
    s.p.reset();
    s.d = 0;
    s.size = SizeInfo{1, std::nullopt};
    s.ell = Label::root(id);
    s.out.reset();
    s.in_sel.reset();
    s.newp.reset();
    s.newd = 0;
  }
  return c;
}

Configuration arbitrary_configuration(GraphPtr g, std::uint64_t seed) {
  Configuration c(g);
  std::mt19937_64 rng(seed);
  const std::uint64_t n = g->node_count();
  const std::uint64_t dmax = 2 * n;
  std::uint64_t wmax = 1;
  for (const auto& e : g->edges()) wmax = std::max(wmax, e.w);
  const std::uint64_t label_len_max = bit_length(n) + 2;  // ceil(log2 n)+2 ballpark

  auto pick_nbr_or_nil = [&](NodeId id) -> std::optional<NodeId> {
    const auto& nbrs = g->neighbors(id);
    std::uniform_int_distribution<std::size_t> d(0, nbrs.size());
    std::size_t k = d(rng);
    if (k == nbrs.size()) return std::nullopt;
    return nbrs[k].first;
  };
  auto pick_dist = [&]() {
    return std::uniform_int_distribution<std::uint64_t>(0, dmax)(rng);
  };
  auto pick_node = [&]() {
    std::uniform_int_distribution<std::size_t> d(0, n - 1);
    return g->id_at(d(rng));
  };
  auto pick_label = [&]() {
    Label l;
    std::uniform_int_distribution<std::uint64_t> len(0, label_len_max);
    std::uint64_t k = len(rng);
    for (std::uint64_t i = 0; i < k; ++i) l.pairs.push_back({pick_node(), pick_dist()});
    return l;
  };

  for (std::size_t i = 0; i < c.size(); ++i) {
    NodeId id = g->id_at(i);
    NodeState& s = c.at_index(i);
    s.p = pick_nbr_or_nil(id);
    s.d = pick_dist();
    s.size.count = std::uniform_int_distribution<std::uint64_t>(1, dmax)(rng);
    s.size.heavy_child = pick_nbr_or_nil(id);
    s.ell = pick_label();
    if (std::uniform_int_distribution<int>(0, 1)(rng)) {
      const auto& edges = g->edges();
      if (!edges.empty()) {
        const Edge& e = edges[std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(rng)];
        Weight w = std::uniform_int_distribution<Weight>(1, wmax)(rng);
        s.out = OutSelection{w, e.u, e.v};
      }
    } else {
      s.out.reset();
    }
    if (std::uniform_int_distribution<int>(0, 1)(rng)) {
      Weight w = std::uniform_int_distribution<Weight>(1, wmax)(rng);
      s.in_sel = InSelection{w, pick_label(), pick_label()};
    } else {
      s.in_sel.reset();
    }
    s.newp = pick_nbr_or_nil(id);
    std::uint64_t nd = std::uniform_int_distribution<std::uint64_t>(0, dmax + 1)(rng);
    s.newd = (nd > dmax) ? kInfDist : nd;
  }
  return c;
}

ParentForest parent_forest(const Configuration& c) {
  const Graph& g = c.graph();
  const std::size_t n = g.node_count();
  // color: 0 unvisited, 1 in progress, 2 done
  std::vector<int> color(n, 0);
  // resolution: 0 unknown, 1 rooted fragment (root_of set), 2 cycle-bound
  std::vector<int> kind(n, 0);
  std::vector<std::size_t> root_of(n, 0);

  for (std::size_t start = 0; start < n; ++start) {
    if (color[start]) continue;
    std::vector<std::size_t> chain;
    std::size_t cur = start;
    while (true) {
      if (color[cur] == 2) {  // reached resolved territory
        for (std::size_t x : chain) {
          color[x] = 2;
          kind[x] = kind[cur];
          root_of[x] = root_of[cur];
        }
        break;
      }
      if (color[cur] == 1) {  // found a new cycle within this chain
        bool on_cycle = false;
        for (std::size_t x : chain) {
          if (x == cur) on_cycle = true;
          (void)on_cycle;
          color[x] = 2;
          kind[x] = 2;  // everything on the chain ends in a cycle
        }
        break;
      }
      color[cur] = 1;
      chain.push_back(cur);
      const NodeState& s = c.at_index(cur);
      if (!s.p) {
        for (std::size_t x : chain) {
          color[x] = 2;
          kind[x] = 1;
          root_of[x] = cur;
        }
        break;
      }
      cur = g.index_of(*s.p);
    }
  }

  ParentForest out;
  std::map<std::size_t, std::vector<NodeId>> frag_members;
  for (std::size_t i = 0; i < n; ++i) {
    if (kind[i] == 2)
      out.cycle_nodes.push_back(g.id_at(i));
    else
      frag_members[root_of[i]].push_back(g.id_at(i));
  }
  for (auto& [root_idx, members] : frag_members) {
    std::sort(members.begin(), members.end());
    out.fragments.push_back({g.id_at(root_idx), std::move(members)});
  }
  std::sort(out.fragments.begin(), out.fragments.end(),
            [](const auto& a, const auto& b) { return a.root < b.root; });
  std::sort(out.cycle_nodes.begin(), out.cycle_nodes.end());
  return out;
}

namespace {

std::string label_str(const Label& l) {
  if (l.empty()) return "-";
  std::string s;
  for (const auto& p : l.pairs)
    s += "(" + std::to_string(p.anchor) + ":" + std::to_string(p.dist) + ")";
  return s;
}

std::string opt_str(const std::optional<NodeId>& v) {
  return v ? std::to_string(*v) : "-";
}

Label parse_label(const std::string& s, const std::string& ctx) {
  Label l;
  if (s == "-") return l;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '(') throw GraphError(ctx + ": bad label " + s);
    std::size_t colon = s.find(':', i);
    std::size_t close = s.find(')', i);
    if (colon == std::string::npos || close == std::string::npos || colon > close)
      throw GraphError(ctx + ": bad label " + s);
    LabelPair p;
    p.anchor = std::stoull(s.substr(i + 1, colon - i - 1));
    p.dist = std::stoull(s.substr(colon + 1, close - colon - 1));
    l.pairs.push_back(p);
    i = close + 1;
  }
  return l;
}

std::optional<NodeId> parse_opt(const std::string& s) {
  if (s == "-") return std::nullopt;
  return std::stoull(s);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::string serialize_configuration(const Configuration& c) {
  std::ostringstream out;
  for (NodeId id : c.graph().node_ids()) {
    const NodeState& s = c.at(id);
    out << "id=" << id;
    out << " p=" << opt_str(s.p);
    out << " d=" << s.d;
    out << " size=" << s.size.count << "," << opt_str(s.size.heavy_child);
    out << " ell=" << label_str(s.ell);
    if (s.out)
      out << " out=" << s.out->w << "," << s.out->lo << "," << s.out->hi;
    else
      out << " out=-";
    if (s.in_sel)
      out << " in=" << s.in_sel->w << "," << label_str(s.in_sel->label_a) << ","
          << label_str(s.in_sel->label_b);
    else
      out << " in=-";
    out << " newp=" << opt_str(s.newp);
    out << " newd=" << (s.newd == kInfDist ? std::string("inf") : std::to_string(s.newd));
    out << '\n';
  }
  return out.str();
}

Configuration deserialize_configuration(GraphPtr g, std::istream& in) {
  Configuration c = singleton_configuration(g);
  std::vector<char> seen(g->node_count(), 0);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::string ctx = "line " + std::to_string(lineno);
    std::istringstream ls(line);
    std::string tok;
    std::map<std::string, std::string> kv;
    while (ls >> tok) {
      std::size_t eq = tok.find('=');
      if (eq == std::string::npos) throw GraphError(ctx + ": expected key=value, got " + tok);
      kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    for (const char* key : {"id", "p", "d", "size", "ell", "out", "in", "newp", "newd"})
      if (!kv.count(key)) throw GraphError(ctx + ": missing field " + key);
    NodeId id = std::stoull(kv["id"]);
    if (!g->has_node(id)) throw GraphError(ctx + ": unknown node " + kv["id"]);
    if (seen[g->index_of(id)]) throw GraphError(ctx + ": duplicate record for node " + kv["id"]);
    seen[g->index_of(id)] = 1;
    NodeState& s = c.at(id);
    s.p = parse_opt(kv["p"]);
    s.d = std::stoull(kv["d"]);
    auto size_parts = split(kv["size"], ',');
    if (size_parts.size() != 2) throw GraphError(ctx + ": bad size field");
    s.size.count = std::stoull(size_parts[0]);
    s.size.heavy_child = parse_opt(size_parts[1]);
    s.ell = parse_label(kv["ell"], ctx);
    if (kv["out"] == "-") {
      s.out.reset();
    } else {
      auto parts = split(kv["out"], ',');
      if (parts.size() != 3) throw GraphError(ctx + ": bad out field");
      s.out = OutSelection{std::stoull(parts[0]), std::stoull(parts[1]), std::stoull(parts[2])};
    }
    if (kv["in"] == "-") {
      s.in_sel.reset();
    } else {
      auto parts = split(kv["in"], ',');
      if (parts.size() != 3) throw GraphError(ctx + ": bad in field");
      s.in_sel = InSelection{std::stoull(parts[0]), parse_label(parts[1], ctx),
                             parse_label(parts[2], ctx)};
    }
    s.newp = parse_opt(kv["newp"]);
    s.newd = (kv["newd"] == "inf") ? kInfDist : std::stoull(kv["newd"]);
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw GraphError("missing record for node " + std::to_string(g->id_at(i)));
  return c;
}

Configuration deserialize_configuration_string(GraphPtr g, const std::string& text) {
  std::istringstream in(text);
  return deserialize_configuration(std::move(g), in);
}

}  // namespace ssmst
