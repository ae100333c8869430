#include <doctest.h>

#include <cmath>

#include "subsearch/domains.hpp"
#include "subsearch/oracle.hpp"
#include "subsearch/search.hpp"
#include "support.hpp"

using namespace subsearch;
using namespace subsearch::testing;

namespace {

ChildExpander with_generator(const Instance& inst, const json& gen, double eps,
                             LowPolicyKind low = LowPolicyKind::Uniform) {
  auto e = low_level_expander(make_domain(inst), eps, low);
  e.generator = make_generator(generator_config_from_json(gen), inst, e.domain);
  e.seed = inst.seed;
  e.instance_fp = inst.fingerprint();
  return e;
}

SearchBudget budget(std::uint64_t n) {
  SearchBudget b;
  b.max_expansions = n;
  return b;
}

}  // namespace

TEST_CASE("a goal start is solved by the first pop") {
  const auto inst = stp_instance(3, 0, 1);
  const auto r = search(inst, low_level_expander(make_domain(inst)), EvalKind::PhsStarScaled, budget(10)).result;
  CHECK(r.solved);
  CHECK(r.expansions == 1);
  CHECK(r.search_loss() == 0);
  CHECK(r.low_level_plan.empty());
}

TEST_CASE("an empty budget expands nothing") {
  const auto inst = stp_instance(3, 10, 1);
  const auto r = search(inst, low_level_expander(make_domain(inst)), EvalKind::LevinTs, budget(0)).result;
  CHECK_FALSE(r.solved);
  CHECK(r.status == SearchStatus::BudgetExhausted);
  CHECK(r.expansions == 0);
}

TEST_CASE("two moves from the goal the plan has the oracle length") {
  StpDomain d(3, {1, 2, 0, 3, 4, 5, 6, 7, 8});
  Instance inst = stp_instance(3, 0, 1);
  inst.initial = json::object();
  auto dom = std::make_shared<StpDomain>(d);
  const auto r = search(inst, low_level_expander(dom), EvalKind::LevinTs, budget(1000)).result;
  REQUIRE(r.solved);
  CHECK(r.low_level_plan.size() == 2);
  CHECK(static_cast<int>(r.low_level_plan.size()) == oracle::bfs_solve(d, d.initial_state())->optimal_length);
  CHECK(d.is_goal(*replay(d, d.initial_state(), r.low_level_plan)));
}

TEST_CASE("a corner blank has two children without a generator") {
  const auto inst = stp_instance(3, 0, 1);
  const auto e = low_level_expander(make_domain(inst));
  CHECK(e.expand(e.domain->initial_state(), 0.0).size() == 2);
}

TEST_CASE("low-level moves and distinct macro subgoals are all children") {
  const auto d = SokobanDomain::from_ascii({
      "#######",
      "#     #",
      "#     #",
      "#  @  #",
      "#     #",
      "#$.   #",
      "#######",
  });
  ChildExpander e;
  e.domain = d;
  e.policy.epsilon = 0.5;
  Instance inst;
  inst.domain = DomainId::Sokoban;
  e.generator = make_generator(
      generator_config_from_json(json{{"kind", "macro"}, {"horizon", 2}, {"catalog", {"NN", "EE", "WW"}}}), inst, d);
  const auto kids = e.expand(d->initial_state(), 0.0);
  CHECK(kids.size() == 7);
  int subgoals = 0;
  for (const auto& k : kids) subgoals += k.kind == EdgeKind::Subgoal ? 1 : 0;
  CHECK(subgoals == 3);

  // A proposal that coincides with a low-level successor is merged into it.
  e.generator = make_generator(
      generator_config_from_json(json{{"kind", "macro"}, {"horizon", 3}, {"catalog", {"N", "NSN"}}}), inst, d);
  const auto merged = e.expand(d->initial_state(), 0.0);
  CHECK(merged.size() == 4);
}

TEST_CASE("a duplicate child keeps the more probable edge, ties going to the low-level edge") {
  const auto inst = stp_instance(3, 0, 1);
  const auto dom = make_domain(inst);
  const State s = dom->initial_state();
  const State east = *dom->apply(s, Action::East);
  for (double eps : {0.5, 0.9, 0.2}) {
    auto e = with_generator(inst, json{{"kind", "macro"}, {"horizon", 1}, {"catalog", {"E"}}}, eps);
    const auto kids = e.expand(s, 0.0);
    REQUIRE(kids.size() == 2);
    const auto& k = kids[0].state == east ? kids[0] : kids[1];
    CHECK(k.state == east);
    // Low-level East has eps/2, the subgoal has 1 - eps.
    const bool low_wins = eps / 2 >= 1 - eps;
    CHECK((k.kind == EdgeKind::LowLevel) == low_wins);
    CHECK(k.log_prob == doctest::Approx(std::log(std::max(eps / 2, 1 - eps))));
  }
}

TEST_CASE("solved plans replay to a goal and dist matches the plan length") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto inst = stp_instance(3, 25, seed);
    for (EvalKind k : {EvalKind::PhsStarScaled, EvalKind::LevinTs, EvalKind::PhsDist, EvalKind::Gbfs}) {
      const auto e = with_generator(inst, json{{"kind", "greedy-rollout"}, {"horizon", 4}, {"max_proposals", 2}}, 0.3,
                                    LowPolicyKind::BoltzmannHeuristic);
      const auto out = search(inst, e, k, budget(20000), {true, true});
      REQUIRE(out.result.solved);
      const auto& sol = out.tree->node(*out.result.solution_node);
      CHECK(sol.dist == out.result.low_level_plan.size());
      CHECK(e.domain->is_goal(*replay(*e.domain, e.domain->initial_state(), out.result.low_level_plan)));
      CHECK(out.result.solution_low_edges + out.result.solution_subgoal_edges == out.result.solution_g);
    }
  }
}

TEST_CASE("node fields respect their invariants along every root path") {
  const auto inst = stp_instance(3, 20, 6);
  const auto e = with_generator(inst, json{{"kind", "adversarial"}, {"horizon", 3}, {"max_proposals", 2}}, 0.2);
  const auto out = search(inst, e, EvalKind::PhsStarScaled, budget(3000), {false, true});
  const auto& t = *out.tree;
  const auto& root = t.node(0);
  CHECK(root.g == 0);
  CHECK(root.dist == 0);
  CHECK(root.log_pi == 0.0);
  for (std::uint32_t i = 1; i < t.size(); ++i) {
    const auto& n = t.node(i);
    const auto& p = t.node(static_cast<std::uint32_t>(n.parent));
    CHECK(n.g == p.g + 1);
    CHECK(n.dist == p.dist + t.edge_actions(n).size());
    CHECK(n.ll_edges == p.ll_edges + (n.edge == EdgeKind::LowLevel ? 1u : 0u));
    CHECK(n.log_pi <= p.log_pi);
    CHECK(n.dist >= n.g);
    CHECK(n.g >= n.ll_edges);
    CHECK(reconstruct_plan(i, t).size() == n.dist);
  }
}

TEST_CASE("reconstructing a path of subgoal edges concatenates their sequences") {
  NodeStore t;
  const std::uint8_t b[1] = {0};
  SearchNode root;
  root.state_id = t.intern(State(b));
  t.add(root, {});
  std::int32_t parent = 0;
  for (const char* seq : {"EE", "SSWN", "W"}) {
    SearchNode n;
    n.parent = parent;
    n.edge = EdgeKind::Subgoal;
    const auto acts = actions_from_string(seq);
    parent = static_cast<std::int32_t>(t.add(n, acts));
  }
  CHECK(actions_to_string(reconstruct_plan(static_cast<std::uint32_t>(parent), t)) == "EESSWNW");
  CHECK(reconstruct_plan(0, t).empty());
  SearchNode orphan;
  orphan.parent = 99;
  const auto id = t.add(orphan, {});
  CHECK_THROWS_AS(reconstruct_plan(id, t), Error);
}

TEST_CASE("search is deterministic") {
  const auto inst = stp_instance(3, 40, 11);
  const auto e = with_generator(inst, json{{"kind", "adversarial"}, {"horizon", 4}, {"max_proposals", 3}}, 0.1,
                                LowPolicyKind::BoltzmannHeuristic);
  const auto a = search(inst, e, EvalKind::PhsStarScaled, budget(2000)).result;
  const auto b = search(inst, e, EvalKind::PhsStarScaled, budget(2000)).result;
  CHECK(to_json(a, false).dump() == to_json(b, false).dump());
}

TEST_CASE("tree search is complete with misleading proposals") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = stp_instance(3, 6, seed);
    const auto e = with_generator(inst, json{{"kind", "adversarial"}, {"horizon", 3}, {"max_proposals", 2}}, 0.5);
    const auto r = search(inst, e, EvalKind::LevinTs, budget(1'000'000), {false, false}).result;
    CHECK(r.solved);
  }
}

TEST_CASE("the to-zero limit matches a vanishing epsilon on a small tree") {
  const json gen{{"kind", "macro"}, {"horizon", 2}, {"max_proposals", 3}, {"catalog", {"NN", "SS", "NS"}}};
  for (int leaf = 0; leaf < 8; ++leaf) {
    CAPTURE(leaf);
    const Instance inst = tree_instance();
    auto dom = std::make_shared<BinaryTree>(3, leaf);
    for (EvalKind k : {EvalKind::LevinTs, EvalKind::PhsStarScaled}) {
      auto limit = low_level_expander(dom, 1.0);
      limit.generator = make_generator(generator_config_from_json(gen), inst, dom);
      limit.policy.to_zero = true;
      auto small = low_level_expander(dom, 1e-12);
      small.generator = limit.generator;
      const auto a = search(inst, limit, k, budget(1000), {false, true});
      const auto b = search(inst, small, k, budget(1000), {false, true});
      CHECK(a.result.expansions == b.result.expansions);
      CHECK(a.result.low_level_plan == b.result.low_level_plan);
      CHECK(a.result.fringe_at_solution == b.result.fringe_at_solution);
    }
  }
}

TEST_CASE("queue exhaustion on an unsolvable board") {
  const auto d = SokobanDomain::from_ascii({
      "#####",
      "#$  #",
      "# @.#",
      "#####",
  });
  ChildExpander e;
  e.domain = d;
  Instance inst;
  inst.domain = DomainId::Sokoban;
  const auto r = search(inst, e, EvalKind::PhsStarScaled, budget(1000)).result;
  CHECK_FALSE(r.solved);
  CHECK(r.status == SearchStatus::QueueExhausted);
}

TEST_CASE("the expander refuses an instance from another domain") {
  Instance inst;
  inst.domain = DomainId::Tsp;
  CHECK_THROWS_AS(search(inst, low_level_expander(make_domain(stp_instance(3, 2, 1))), EvalKind::LevinTs, budget(5)),
                  Error);
}
