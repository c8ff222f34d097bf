#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "ssmst/labeling.hpp"
#include "ssmst/oracles.hpp"

using namespace ssmst;
using namespace ssmst::testing;

TEST_CASE("children reads parent pointers") {
  auto g = tree_graph({{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  auto c = singleton_configuration(g);
  for (NodeId v : g->node_ids()) CHECK(children(c, v).empty());
  for (NodeId leaf : {1, 2, 3, 4}) c.at(leaf).p = 0;
  CHECK_EQ(children(c, 0), std::vector<NodeId>{1, 2, 3, 4});
}

TEST_CASE("nbr_nd_s sums children and designates the heavy child") {
  auto g = tree_graph({{0, 4}, {0, 6}, {4, 1}, {4, 2}, {6, 3}, {6, 5}});
  auto c = singleton_configuration(g);
  c.at(4).p = 0;
  c.at(6).p = 0;

  SUBCASE("distinct sizes: larger subtree wins") {
    c.at(4).size = {2, std::nullopt};
    c.at(6).size = {3, std::nullopt};
    CHECK_EQ(nbr_nd_s(c, 0), SizeInfo{6, 6});
  }
  SUBCASE("tie broken to the max id") {
    c.at(4).size = {2, std::nullopt};
    c.at(6).size = {2, std::nullopt};
    CHECK_EQ(nbr_nd_s(c, 0), SizeInfo{5, 6});
  }
}

TEST_CASE("nbr_nd_s single child") {
  auto g = tree_graph({{0, 9}});
  auto c = singleton_configuration(g);
  c.at(9).p = 0;
  CHECK_EQ(nbr_nd_s(c, 0), SizeInfo{2, 9});
}

TEST_CASE("predicates: root label form") {
  auto g = tree_graph({{0, 1}});
  auto c = singleton_configuration(g);
  CHECK(predicates(c, 0).label_r);
  c.at(0).ell = mk_label({{0, 3}});
  CHECK_FALSE(predicates(c, 0).label_r);
  CHECK_FALSE(predicates(c, 0).label_ok);
}

TEST_CASE("predicates: heavy and light label structure") {
  auto g = tree_graph({{0, 1}, {0, 2}});
  auto c = singleton_configuration(g);
  c.at(1).p = 0;
  c.at(2).p = 0;
  c.at(1).d = c.at(2).d = 1;
  c.at(0).size = {3, 2};  // 2 designated heavy (tie -> max id)
  c.at(1).size = {1, std::nullopt};
  c.at(2).size = {1, std::nullopt};
  c.at(0).ell = mk_label({{0, 0}});

  c.at(2).ell = mk_label({{0, 1}});  // heavy: parent's label, last distance + 1
  CHECK(predicates(c, 2).heavy);
  CHECK(predicates(c, 2).label_ok);

  c.at(1).ell = mk_label({{0, 0}, {1, 0}});  // light: parent's label + (id, 0)
  CHECK(predicates(c, 1).light);
  CHECK(predicates(c, 1).label_ok);

  // correct size but a label that matches neither form
  c.at(1).ell = mk_label({{0, 5}, {1, 0}});
  CHECK_FALSE(predicates(c, 1).label_ok);

  // heavy form with the wrong anchor is not legitimate
  c.at(2).ell = mk_label({{7, 1}});
  CHECK_FALSE(predicates(c, 2).label_ok);
}

TEST_CASE("R_SC resets leaves and recomputes interior sizes") {
  auto g = tree_graph({{0, 1}, {1, 2}, {1, 3}});
  auto c = singleton_configuration(g);
  c.at(1).p = 0;
  c.at(2).p = 1;
  c.at(3).p = 1;

  c.at(3).size = {4, std::nullopt};  // corrupted leaf
  CHECK(guard_RSC(c, 3));
  CHECK_EQ(act_RSC(c, 3).size, SizeInfo{1, std::nullopt});
  c.at(3).size = {1, std::nullopt};

  c.at(2).size = {2, std::nullopt};
  c.at(3).size = {3, std::nullopt};
  CHECK(guard_RSC(c, 1));
  CHECK_EQ(act_RSC(c, 1).size, SizeInfo{6, 3});

  c.at(1).size = {6, 3};
  CHECK_FALSE(guard_RSC(c, 1));  // already satisfied
}

TEST_CASE("R_LC heavy action increments the last distance") {
  auto g = tree_graph({{0, 1}, {1, 2}});
  auto c = singleton_configuration(g);
  c.at(1).p = 0;
  c.at(1).d = 1;
  c.at(2).p = 1;
  c.at(2).d = 2;
  c.at(0).size = {3, 1};
  c.at(1).size = {2, 2};
  c.at(2).size = {1, std::nullopt};

  CHECK(guard_RLC(c, 1));
  CHECK_EQ(act_RLC(c, 1).ell, mk_label({{0, 1}}));  // heavy child of the root

  c.at(1).ell = mk_label({{0, 1}});
  CHECK(guard_RLC(c, 2));
  CHECK_EQ(act_RLC(c, 2).ell, mk_label({{0, 2}}));

  c.at(2).ell = mk_label({{0, 2}});
  CHECK_FALSE(guard_RLC(c, 2));
}

TEST_CASE("R_LC light action appends (id, 0)") {
  auto g = tree_graph({{0, 2}, {2, 9}, {2, 3}, {3, 4}});
  auto c = singleton_configuration(g);
  c.at(2).p = 0;
  c.at(2).d = 1;
  c.at(9).p = 2;
  c.at(9).d = 2;
  c.at(3).p = 2;
  c.at(3).d = 2;
  c.at(4).p = 3;
  c.at(4).d = 3;
  c.at(0).size = {5, 2};
  c.at(2).size = {4, 3};  // 3 heavy, 9 light
  c.at(3).size = {2, 4};
  c.at(9).size = {1, std::nullopt};
  c.at(2).ell = mk_label({{0, 0}, {2, 3}});

  CHECK(guard_RLC(c, 9));
  CHECK_EQ(act_RLC(c, 9).ell, mk_label({{0, 0}, {2, 3}, {9, 0}}));
}

TEST_CASE("R_LC resets a corrupted root label") {
  auto g = tree_graph({{0, 1}});
  auto c = singleton_configuration(g);
  c.at(0).ell = mk_label({{5, 1}, {0, 2}});
  CHECK(guard_RLC(c, 0));
  CHECK_EQ(act_RLC(c, 0).ell, Label::root(0));
}

TEST_CASE("worked example: stabilized labels and the decoded ancestor") {
  auto g = example_tree();
  auto c = tree_configuration(g, example_parents());
  REQUIRE_LT(settle_labels(c), 10000);

  CHECK_EQ(c.at(9).ell, mk_label({{0, 0}, {2, 1}, {9, 0}}));
  CHECK_EQ(c.at(10).ell, mk_label({{0, 0}, {2, 3}}));
  auto nca = nca_decode(c.at(9).ell, c.at(10).ell);
  REQUIRE(nca);
  CHECK_EQ(*nca, mk_label({{0, 0}, {2, 1}}));
  CHECK_EQ(c.at(3).ell, mk_label({{0, 0}, {2, 1}}));  // node 3 is the ancestor

  auto t = tree_of_configuration(c);
  CHECK_EQ(brute_force_lca(t, 9, 10), std::optional<NodeId>{3});
}

TEST_CASE("nca_decode cases") {
  CHECK_EQ(nca_decode(mk_label({{5, 0}}), mk_label({{5, 4}})), mk_label({{5, 0}}));
  CHECK_EQ(nca_decode(mk_label({{0, 2}, {5, 0}}), mk_label({{0, 4}, {7, 0}})), mk_label({{0, 2}}));
  CHECK_FALSE(nca_decode(mk_label({{3, 0}}), mk_label({{8, 1}})));
  // one label a strict prefix of the other: the shorter owner is the ancestor
  CHECK_EQ(nca_decode(mk_label({{0, 0}, {2, 1}, {9, 0}}), mk_label({{0, 0}, {2, 1}})),
           mk_label({{0, 0}, {2, 1}}));
  CHECK_EQ(nca_decode(mk_label({{4, 7}}), mk_label({{4, 7}})), mk_label({{4, 7}}));
  // corrupted empty label acts as everyone's prefix: ancestor, not foreign
  auto with_empty = nca_decode(Label{}, mk_label({{1, 0}}));
  REQUIRE(with_empty);
  CHECK(with_empty->empty());
}

TEST_CASE("stabilized encoder matches brute-force LCA on random trees") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 8; ++trial) {
    std::size_t n = 20 + trial * 25;
    auto [g, parents] = random_tree(n, rng);
    auto c = tree_configuration(g, parents);
    REQUIRE_LT(settle_labels(c), 10000);

    auto t = tree_of_configuration(c);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u; v < n; ++v) {
        auto code = nca_decode(c.at(u).ell, c.at(v).ell);
        auto truth = brute_force_lca(t, u, v);
        REQUIRE(code);
        REQUIRE(truth);
        REQUIRE_EQ(*code, c.at(*truth).ell);
      }

    // legitimate labels stay within the logarithmic length bound
    for (NodeId v = 0; v < n; ++v) CHECK_LE(c.at(v).ell.size(), bit_length(n));
  }
}

TEST_CASE("labels of distinct nodes in one tree differ after stabilization") {
  auto g = example_tree();
  auto c = tree_configuration(g, example_parents());
  settle_labels(c);
  for (NodeId u : g->node_ids())
    for (NodeId v : g->node_ids())
      if (u != v) CHECK_FALSE(c.at(u).ell == c.at(v).ell);
}
