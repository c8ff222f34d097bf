#include "ssmst/engine.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ssmst {

Scheduler::Scheduler(Configuration initial, DaemonPolicy policy)
    : cur_(std::move(initial)),
      policy_(policy),
      rng_(policy.seed),
      cache_(cur_.size()),
      dirty_(cur_.size(), 1),
      pending_(cur_.size(), 0),
      starve_(cur_.size(), 0) {
  refresh_cache();
  open_round();
}

void Scheduler::recompute(std::size_t idx) {
  cache_[idx] = enabled_rule(cur_, cur_.graph().id_at(idx));
  dirty_[idx] = 0;
}

void Scheduler::refresh_cache() {
  for (std::size_t i = 0; i < cache_.size(); ++i)
    if (dirty_[i]) recompute(i);
}

void Scheduler::mark_dirty_around(std::size_t idx) {
  dirty_[idx] = 1;
  NodeId id = cur_.graph().id_at(idx);
  for (const auto& [nbr, w] : cur_.graph().neighbors(id)) {
    (void)w;
    dirty_[cur_.graph().index_of(nbr)] = 1;
  }
}

void Scheduler::open_round() {
  pending_count_ = 0;
  for (std::size_t i = 0; i < cache_.size(); ++i) {
    pending_[i] = cache_[i].has_value();
    if (pending_[i]) ++pending_count_;
  }
  round_fired_.clear();
}

bool Scheduler::any_enabled() const {
  for (const auto& e : cache_)
    if (e) return true;
  return false;
}

std::vector<std::size_t> Scheduler::select_nodes() {
  std::vector<std::size_t> enabled_idx;
  for (std::size_t i = 0; i < cache_.size(); ++i)
    if (cache_[i]) enabled_idx.push_back(i);
  if (enabled_idx.empty()) return {};

  switch (policy_.kind) {
    case PolicyKind::Synchronous:
      return enabled_idx;
    case PolicyKind::RoundRobin: {
      for (std::size_t off = 0; off < cache_.size(); ++off) {
        std::size_t i = (rr_cursor_ + off) % cache_.size();
        if (cache_[i]) {
          rr_cursor_ = (i + 1) % cache_.size();
          return {i};
        }
      }
      return {};
    }
    case PolicyKind::RandomFair: {
      // hard fairness: a node continuously enabled for n steps fires now
      const std::uint64_t bound = cache_.size();
      std::size_t forced = cache_.size();
      std::uint64_t worst = 0;
      for (std::size_t i : enabled_idx) {
        if (starve_[i] >= bound && starve_[i] > worst) {
          worst = starve_[i];
          forced = i;
        }
      }
      if (forced < cache_.size()) return {forced};
      std::uniform_int_distribution<std::size_t> pick(0, enabled_idx.size() - 1);
      return {enabled_idx[pick(rng_)]};
    }
  }
  return {};
}

StepRecord Scheduler::step(RunObserver* obs) {
  StepRecord rec;
  rec.step = steps_;
  rec.round = rounds_;
  auto selected = select_nodes();
  if (selected.empty()) {
    ++steps_;
    return rec;
  }

  // compute all actions against the pre-step snapshot
  std::vector<NodeState> results;
  results.reserve(selected.size());
  for (std::size_t i : selected) {
    NodeId id = cur_.graph().id_at(i);
    RuleId r = *cache_[i];
    rec.fired.push_back({id, r});
    results.push_back(apply_rule(cur_, id, r));
  }
  if (obs) obs->on_step(cur_, rec);

  for (std::size_t k = 0; k < selected.size(); ++k)
    cur_.at_index(selected[k]) = results[k];
  moves_ += selected.size();
  ++steps_;

  for (std::size_t i : selected) mark_dirty_around(i);
  refresh_cache();

  // starvation accounting
  if (policy_.kind == PolicyKind::RandomFair) {
    std::vector<char> fired_now(cache_.size(), 0);
    for (std::size_t i : selected) fired_now[i] = 1;
    for (std::size_t i = 0; i < cache_.size(); ++i) {
      if (fired_now[i] || !cache_[i])
        starve_[i] = 0;
      else
        ++starve_[i];
    }
  }

  // round obligations: fired or no longer enabled
  for (std::size_t i : selected) {
    if (pending_[i]) {
      pending_[i] = 0;
      --pending_count_;
    }
  }
  for (std::size_t i = 0; i < cache_.size(); ++i) {
    if (pending_[i] && !cache_[i]) {
      pending_[i] = 0;
      --pending_count_;
    }
  }
  round_fired_.insert(round_fired_.end(), rec.fired.begin(), rec.fired.end());

  if (pending_count_ == 0) {
    if (obs) obs->on_round(rounds_, cur_, round_fired_);
    ++rounds_;
    open_round();
  }
  return rec;
}

std::uint64_t Scheduler::run_rounds(std::uint64_t upto, RunObserver* obs) {
  std::uint64_t before = rounds_;
  while (rounds_ < upto && any_enabled()) step(obs);
  return rounds_ - before;
}

namespace {

struct CoreVector {
  std::vector<std::optional<NodeId>> p;
  std::vector<std::uint64_t> d;
  std::vector<Label> ell;

  explicit CoreVector(const Configuration& c) {
    p.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto& s = c.at_index(i);
      p.push_back(s.p);
      d.push_back(s.d);
      ell.push_back(s.ell);
    }
  }
  friend bool operator==(const CoreVector&, const CoreVector&) = default;
};

}  // namespace

RunResult run(Configuration start, const RunConfig& cfg, RunObserver* obs) {
  if (cfg.max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
  // default window covers a full cyclic sweep of the internal-edge pipeline:
  // a pending red-rule deletion can legitimately hide for ~n*h rounds
  const std::uint64_t n = start.graph().node_count();
  const std::uint64_t window = cfg.confirm_window ? cfg.confirm_window : 2 * n * (n + 2);

  Scheduler sched(std::move(start), cfg.policy);

  struct Recorder : RunObserver {
    RunObserver* inner = nullptr;
    bool record = false;
    std::vector<StepRecord>* sink = nullptr;
    CoreVector* prev = nullptr;
    std::uint64_t quiet_rounds = 0;
    const Configuration* last_round_config = nullptr;

    void on_step(const Configuration& pre, const StepRecord& rec) override {
      if (record && !rec.fired.empty()) sink->push_back(rec);
      if (inner) inner->on_step(pre, rec);
    }
    void on_round(std::uint64_t round, const Configuration& at_boundary,
                  const std::vector<std::pair<NodeId, RuleId>>& fired) override {
      bool only_rrec = std::all_of(fired.begin(), fired.end(),
                                   [](const auto& f) { return f.second == RuleId::RRec; });
      CoreVector now(at_boundary);
      if (prev && *prev == now && only_rrec)
        ++quiet_rounds;
      else
        quiet_rounds = 0;
      *prev = std::move(now);
      if (inner) inner->on_round(round, at_boundary, fired);
    }
  };

  RunResult result{Configuration(sched.config()), 0, 0, false, {}};
  CoreVector prev(sched.config());
  Recorder rec;
  rec.inner = obs;
  rec.record = cfg.record_steps;
  rec.sink = &result.trace;
  rec.prev = &prev;

  while (sched.rounds_completed() < cfg.max_rounds) {
    if (!sched.any_enabled()) {  // total quiescence: nothing can ever change
      result.stabilized = true;
      break;
    }
    std::uint64_t target = sched.rounds_completed() + 1;
    sched.run_rounds(target, &rec);
    if (rec.quiet_rounds >= window) {
      result.stabilized = true;
      break;
    }
  }
  result.final_config = sched.config();
  result.rounds = sched.rounds_completed();
  result.moves = sched.moves();
  return result;
}

DaemonPolicy parse_policy(const std::string& text) {
  if (text == "sync") return {PolicyKind::Synchronous, 0};
  if (text == "rr") return {PolicyKind::RoundRobin, 0};
  if (text.rfind("random", 0) == 0) {
    DaemonPolicy p{PolicyKind::RandomFair, 0};
    auto colon = text.find(':');
    if (colon != std::string::npos) p.seed = std::stoull(text.substr(colon + 1));
    return p;
  }
  throw std::invalid_argument("unknown daemon policy: " + text);
}

std::string policy_name(const DaemonPolicy& p) {
  switch (p.kind) {
    case PolicyKind::Synchronous: return "sync";
    case PolicyKind::RoundRobin: return "rr";
    case PolicyKind::RandomFair: return "random:" + std::to_string(p.seed);
  }
  return "?";
}

}  // namespace ssmst
