#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <vector>

#include "ssmst/rules.hpp"
#include "ssmst/state.hpp"

namespace ssmst {

enum class PolicyKind {
  Synchronous,  // all enabled nodes fire each step
  RoundRobin,   // one node per step, fixed id order, skipping disabled
  RandomFair,   // uniform among enabled, starvation counter forces fairness
};

struct DaemonPolicy {
  PolicyKind kind = PolicyKind::Synchronous;
  std::uint64_t seed = 0;  // RandomFair only
};

struct StepRecord {
  std::uint64_t step = 0;
  std::uint64_t round = 0;
  std::vector<std::pair<NodeId, RuleId>> fired;  // subset of pre-step enabled set
};

struct RunResult {
  Configuration final_config;
  std::uint64_t rounds = 0;
  std::uint64_t moves = 0;  // total rule firings
  bool stabilized = false;
  std::vector<StepRecord> trace;  // only when record_steps
};

struct RunConfig {
  DaemonPolicy policy;
  std::uint64_t max_rounds = 1;
  std::uint64_t confirm_window = 0;  // 0 -> 2n
  bool record_steps = false;
};

class RunObserver {
public:
  virtual ~RunObserver() = default;
  // Called before the step's writes land, with the pre-step configuration.
  virtual void on_step(const Configuration& pre, const StepRecord& rec) { (void)pre; (void)rec; }
  // Called when a round closes, with the configuration at the boundary and
  // everything fired during the round.
  virtual void on_round(std::uint64_t round, const Configuration& at_boundary,
                        const std::vector<std::pair<NodeId, RuleId>>& fired) {
    (void)round; (void)at_boundary; (void)fired;
  }
};

// Deterministic step/round executor for one run. Guard evaluation reads one
// immutable snapshot; all selected actions are computed before any write.
class Scheduler {
public:
  Scheduler(Configuration initial, DaemonPolicy policy);

  const Configuration& config() const { return cur_; }
  std::uint64_t rounds_completed() const { return rounds_; }
  std::uint64_t moves() const { return moves_; }
  bool any_enabled() const;

  // Executes one step; returns what fired. Empty record when nothing is
  // enabled. `rec.round` is the round the step belongs to.
  StepRecord step(RunObserver* obs = nullptr);

  // Runs rounds until the round counter reaches `upto` or nothing is
  // enabled. Returns number of rounds completed in this call.
  std::uint64_t run_rounds(std::uint64_t upto, RunObserver* obs = nullptr);

private:
  void recompute(std::size_t idx);
  void mark_dirty_around(std::size_t idx);
  void refresh_cache();
  void open_round();
  std::vector<std::size_t> select_nodes();

  Configuration cur_;
  DaemonPolicy policy_;
  std::mt19937_64 rng_;
  std::vector<std::optional<RuleId>> cache_;
  std::vector<char> dirty_;
  std::vector<char> pending_;  // round obligations
  std::size_t pending_count_ = 0;
  std::vector<std::uint64_t> starve_;
  std::size_t rr_cursor_ = 0;
  std::uint64_t rounds_ = 0;
  std::uint64_t steps_ = 0;
  std::uint64_t moves_ = 0;
  std::vector<std::pair<NodeId, RuleId>> round_fired_;
};

// Runs until the (p, d, ell) vectors stay fixed for `confirm_window`
// consecutive rounds with nothing but RRec firing, or until nothing is
// enabled at all, or until max_rounds elapses.
RunResult run(Configuration start, const RunConfig& cfg, RunObserver* obs = nullptr);

DaemonPolicy parse_policy(const std::string& text);  // "sync" | "rr" | "random:SEED"
std::string policy_name(const DaemonPolicy& p);

}  // namespace ssmst
