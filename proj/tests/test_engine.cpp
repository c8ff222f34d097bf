#include <doctest.h>

#include <map>
#include <set>

#include "helpers.hpp"
#include "ssmst/engine.hpp"
#include "ssmst/oracles.hpp"

using namespace ssmst;
using namespace ssmst::testing;

namespace {

GraphPtr p3() { return parse_graph_string("3 2\n1 2 1\n2 3 2\n"); }

RunConfig cfg_for(const Graph& g, DaemonPolicy policy) {
  RunConfig cfg;
  cfg.policy = policy;
  cfg.max_rounds = 40 * g.node_count() * g.node_count() + 100;
  return cfg;
}

}  // namespace

TEST_CASE("synchronous step fires every enabled node at once") {
  auto g = parse_graph_string("2 1\n1 2 4\n");
  Scheduler sched(singleton_configuration(g), {PolicyKind::Synchronous, 0});
  auto rec = sched.step();
  REQUIRE_EQ(rec.fired.size(), 2);
  CHECK_EQ(rec.fired[0], std::pair<NodeId, RuleId>{1, RuleId::RMin});
  CHECK_EQ(rec.fired[1], std::pair<NodeId, RuleId>{2, RuleId::RMin});
}

TEST_CASE("round robin fires exactly one node per step") {
  auto g = p3();
  Scheduler sched(singleton_configuration(g), {PolicyKind::RoundRobin, 0});
  for (int i = 0; i < 10; ++i) {
    auto rec = sched.step();
    CHECK_LE(rec.fired.size(), 1);
  }
}

TEST_CASE("fired sets are subsets of the pre-step enabled set") {
  auto g = generate_graph({GraphModel::Random, 8, 0.4, 1, 20}, 11);
  struct Audit : RunObserver {
    void on_step(const Configuration& pre, const StepRecord& rec) override {
      for (auto [id, rule] : rec.fired) {
        auto want = enabled_rule(pre, id);
        REQUIRE(want);
        REQUIRE_EQ(*want, rule);
      }
    }
  } audit;
  auto start = arbitrary_configuration(g, 42);
  for (auto kind : {PolicyKind::Synchronous, PolicyKind::RoundRobin, PolicyKind::RandomFair}) {
    RunConfig cfg = cfg_for(*g, {kind, 7});
    cfg.max_rounds = 200;
    run(start, cfg, &audit);
  }
}

TEST_CASE("synchronous daemon: every step is one round") {
  auto g = p3();
  Scheduler sched(singleton_configuration(g), {PolicyKind::Synchronous, 0});
  std::uint64_t steps = 0;
  while (sched.any_enabled() && steps < 50) {
    auto rec = sched.step();
    if (!rec.fired.empty()) CHECK_EQ(rec.round, steps);
    ++steps;
    if (sched.rounds_completed() >= 30) break;
  }
  CHECK_GE(sched.rounds_completed(), 1);
}

TEST_CASE("round robin: a round closes within n steps when all stay enabled") {
  auto g = p3();
  Scheduler sched(singleton_configuration(g), {PolicyKind::RoundRobin, 0});
  // initially all three nodes are enabled (RMin); 3 steps close round 0
  CHECK_EQ(sched.rounds_completed(), 0);
  sched.step();
  sched.step();
  sched.step();
  CHECK_EQ(sched.rounds_completed(), 1);
}

TEST_CASE("a node disabled by a neighbor's move still closes the round") {
  // 3 <- 2 <- 1 chain with wrong d at 3: RCorrect at 3 will repair; node 2's
  // pending RSC work disappears when 3's subtree size stops mattering...
  // build directly: 1 root, 2 child with wrong size, 3 child of 2 with d=9.
  auto g = p3();
  auto c = singleton_configuration(g);
  c.at(2).p = 1;
  c.at(2).d = 1;
  c.at(2).newp = 1;
  c.at(2).newd = 1;
  c.at(3).p = 2;
  c.at(3).d = 9;  // not d_2 + 1: RCorrect enabled at 3
  c.at(1).size = {2, 2};
  c.at(2).size = {1, std::nullopt};  // wrong: has child 3 -> RSC enabled at 2
  c.at(2).ell = mk_label({{1, 1}});

  Scheduler sched(c, {PolicyKind::RoundRobin, 0});
  // round-robin visits 1, then 2 (fires RSC), then 3 (RCorrect d:=2)...
  // after 3's repair node 2's size is again wrong, but the round must have
  // closed for every node enabled at its start
  std::uint64_t r0 = sched.rounds_completed();
  for (int i = 0; i < 6 && sched.rounds_completed() == r0; ++i) sched.step();
  CHECK_GT(sched.rounds_completed(), r0);
}

TEST_CASE("identical runs produce identical traces") {
  auto g = generate_graph({GraphModel::Random, 9, 0.4, 1, 30}, 17);
  auto start = arbitrary_configuration(g, 5);
  for (auto kind : {PolicyKind::Synchronous, PolicyKind::RoundRobin, PolicyKind::RandomFair}) {
    RunConfig cfg = cfg_for(*g, {kind, 23});
    cfg.record_steps = true;
    auto a = run(start, cfg);
    auto b = run(start, cfg);
    REQUIRE_EQ(a.trace.size(), b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
      CHECK_EQ(a.trace[i].fired, b.trace[i].fired);
      CHECK_EQ(a.trace[i].round, b.trace[i].round);
    }
    CHECK(a.final_config == b.final_config);
    CHECK_EQ(a.rounds, b.rounds);
    CHECK_EQ(a.moves, b.moves);
  }
}

TEST_CASE("P3 from singleton start stabilizes to the path under every policy") {
  auto g = p3();
  for (auto kind : {PolicyKind::Synchronous, PolicyKind::RoundRobin, PolicyKind::RandomFair}) {
    CAPTURE(static_cast<int>(kind));
    auto res = run(singleton_configuration(g), cfg_for(*g, {kind, 3}));
    CHECK(res.stabilized);
    auto mst = check_mst(res.final_config);
    CHECK_EQ(mst.verdict, MstVerdict::Legitimate);
    CHECK_EQ(mst.tree_weight, 3);
  }
}

TEST_CASE("K5 under a one-round budget does not claim stabilization") {
  auto g = generate_graph({GraphModel::Complete, 5, 0.0, 1, 100}, 7);
  RunConfig cfg;
  cfg.policy = {PolicyKind::Synchronous, 0};
  cfg.max_rounds = 1;
  auto res = run(singleton_configuration(g), cfg);
  CHECK_FALSE(res.stabilized);
}

TEST_CASE("arbitrary configurations on C4 stabilize to the cycle's MST") {
  auto g = generate_graph({GraphModel::Cycle, 4, 0.0, 1, 9}, 2);
  Weight want = kruskal_mst(*g).total;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    auto res = run(arbitrary_configuration(g, seed), cfg_for(*g, {PolicyKind::Synchronous, 0}));
    CAPTURE(seed);
    REQUIRE(res.stabilized);
    auto mst = check_mst(res.final_config);
    CHECK_EQ(mst.verdict, MstVerdict::Legitimate);
    CHECK_EQ(mst.tree_weight, want);
  }
}

TEST_CASE("known seed on C4 yields a parent cycle and it gets destroyed") {
  auto g = generate_graph({GraphModel::Cycle, 4, 0.0, 1, 9}, 2);
  // find a seed whose initial parent digraph contains a cycle, freeze it
  std::optional<std::uint64_t> cyclic_seed;
  for (std::uint64_t seed = 0; seed < 200 && !cyclic_seed; ++seed) {
    auto c = arbitrary_configuration(g, seed);
    if (!parent_forest(c).cycle_nodes.empty()) cyclic_seed = seed;
  }
  REQUIRE(cyclic_seed);
  CHECK_EQ(*cyclic_seed, 1);  // regression pin: first cyclic seed for this graph

  auto c = arbitrary_configuration(g, *cyclic_seed);
  Scheduler sched(c, {PolicyKind::Synchronous, 0});
  std::uint64_t deadline = 2 * g->node_count();
  bool clean = false;
  while (sched.rounds_completed() < deadline) {
    sched.run_rounds(sched.rounds_completed() + 1);
    if (parent_forest(sched.config()).cycle_nodes.empty()) {
      clean = true;
      break;
    }
  }
  CHECK(clean);
}

TEST_CASE("weak fairness: no node stays continuously enabled for a whole round without firing") {
  auto g = generate_graph({GraphModel::Random, 7, 0.5, 1, 15}, 23);
  struct FairnessAudit : RunObserver {
    // every node enabled at a round's start must fire or be seen disabled
    // before the round closes
    bool fresh_round = true;
    std::set<NodeId> satisfied;

    void on_step(const Configuration& pre, const StepRecord& rec) override {
      if (fresh_round) {
        fresh_round = false;
        satisfied.clear();
        for (NodeId v : pre.graph().node_ids())
          if (!enabled_rule(pre, v)) satisfied.insert(v);
      }
      for (auto [id, rule] : rec.fired) {
        (void)rule;
        satisfied.insert(id);
      }
      for (NodeId v : pre.graph().node_ids())
        if (!enabled_rule(pre, v)) satisfied.insert(v);
    }
    void on_round(std::uint64_t, const Configuration& post,
                  const std::vector<std::pair<NodeId, RuleId>>&) override {
      for (NodeId v : post.graph().node_ids())
        if (!enabled_rule(post, v)) satisfied.insert(v);
      CHECK_EQ(satisfied.size(), post.graph().node_count());
      fresh_round = true;
    }
  };
  for (auto kind : {PolicyKind::Synchronous, PolicyKind::RoundRobin, PolicyKind::RandomFair}) {
    FairnessAudit audit;
    RunConfig cfg = cfg_for(*g, {kind, 5});
    cfg.max_rounds = 150;
    run(arbitrary_configuration(g, 3), cfg, &audit);
  }
}

TEST_CASE("stabilization soundness on mixed policies and seeds") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = generate_graph({GraphModel::Random, 7 + seed % 4, 0.5, 1, 25}, 100 + seed);
    PolicyKind kind = seed % 3 == 0   ? PolicyKind::Synchronous
                      : seed % 3 == 1 ? PolicyKind::RoundRobin
                                      : PolicyKind::RandomFair;
    auto res = run(arbitrary_configuration(g, seed), cfg_for(*g, {kind, seed}));
    CAPTURE(seed);
    REQUIRE(res.stabilized);
    CHECK_EQ(check_mst(res.final_config).verdict, MstVerdict::Legitimate);
  }
}

TEST_CASE("single node graph is already legitimate") {
  std::vector<NodeId> one{0};
  auto g = std::make_shared<Graph>(one, std::vector<Edge>{});
  auto res = run(singleton_configuration(g), cfg_for(*g, {PolicyKind::Synchronous, 0}));
  CHECK(res.stabilized);
  CHECK_EQ(check_mst(res.final_config).verdict, MstVerdict::Legitimate);
}
