#include <doctest.h>

#include <algorithm>
#include <set>

#include "subsearch/domains.hpp"
#include "subsearch/generators.hpp"
#include "subsearch/oracle.hpp"
#include "support.hpp"

using namespace subsearch;
using subsearch::testing::stp_instance;

namespace {

GeneratorConfig config(const json& j) { return generator_config_from_json(j); }

std::vector<SubgoalProposal> proposals(const json& cfg, const Instance& inst, const State& s,
                                       const GeneratorResources& res = {}) {
  const auto dom = make_domain(inst);
  const auto gen = make_generator(config(cfg), inst, dom, res);
  return propose(*gen, *dom, s, 17);
}

}  // namespace

TEST_CASE("null generator proposes nothing") {
  const auto inst = stp_instance(3, 10, 1);
  CHECK(proposals(json{{"kind", "null"}}, inst, make_domain(inst)->initial_state()).empty());
}

TEST_CASE("macro proposals land on the replayed targets") {
  const auto inst = stp_instance(3, 0, 1);
  const auto dom = make_domain(inst);
  const State s = dom->initial_state();
  const auto p = proposals(json{{"kind", "macro"}, {"horizon", 2}, {"max_proposals", 4}, {"catalog", {"EE", "SS"}}},
                           inst, s);
  REQUIRE(p.size() == 2);
  CHECK(p[0].target == *replay(*dom, s, actions_from_string("EE")));
  CHECK(p[1].target == *replay(*dom, s, actions_from_string("SS")));
  CHECK(p[0].proposal_id == 0);
  CHECK(p[1].proposal_id == 1);

  // From the goal board a westward slide is illegal, so the macro is dropped.
  const auto q = proposals(json{{"kind", "macro"}, {"horizon", 2}, {"catalog", {"WE", "NE", "WS"}}}, inst, s);
  CHECK(q.empty());
}

TEST_CASE("propose drops sequences that return to the current state") {
  const auto inst = stp_instance(3, 0, 1);
  const auto s = make_domain(inst)->initial_state();
  const auto p = proposals(json{{"kind", "macro"}, {"horizon", 4}, {"catalog", {"EW", "SN", "E"}}}, inst, s);
  REQUIRE(p.size() == 1);
  CHECK(actions_to_string(p[0].actions) == "E");
}

TEST_CASE("propose keeps the shortest sequence per target and caps at K") {
  const auto inst = stp_instance(3, 0, 1);
  const auto s = make_domain(inst)->initial_state();
  const auto p = proposals(
      json{{"kind", "macro"}, {"horizon", 4}, {"max_proposals", 2}, {"catalog", {"EWEE", "EE", "S", "ES"}}}, inst, s);
  REQUIRE(p.size() == 2);
  CHECK(actions_to_string(p[0].actions) == "EE");
  CHECK(actions_to_string(p[1].actions) == "S");
}

TEST_CASE("adversarial proposals never start with an optimal action or end on a goal") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = stp_instance(3, 20, seed);
    const auto dom = make_domain(inst);
    const auto gen = make_generator(config(json{{"kind", "adversarial"}, {"horizon", 3}, {"max_proposals", 3}}), inst,
                                    dom);
    State s = dom->initial_state();
    for (Action a : inst.witness) {
      const auto best = oracle::optimal_first_actions(*dom, s);
      for (const auto& p : propose(*gen, *dom, s, seed)) {
        CHECK(std::find(best.begin(), best.end(), p.actions.front()) == best.end());
        CHECK_FALSE(dom->is_goal(p.target));
        CHECK(p.actions.size() <= 3);
      }
      s = *dom->apply(s, a);
    }
  }
}

TEST_CASE("away-from-goal proposals strictly increase the goal distance at every step") {
  const auto inst = stp_instance(3, 20, 4);
  const auto dom = make_domain(inst);
  const oracle::DistanceMap dist(*dom, dom->initial_state());
  const auto p = proposals(json{{"kind", "adversarial"}, {"mode", "away-from-goal"}, {"horizon", 4}}, inst,
                           dom->initial_state());
  REQUIRE_FALSE(p.empty());
  for (const auto& prop : p) {
    State s = dom->initial_state();
    for (Action a : prop.actions) {
      const State next = *dom->apply(s, a);
      CHECK(*dist.distance(next) > *dist.distance(s));
      s = next;
    }
  }
}

TEST_CASE("greedy rollout proposes valid heuristic-improving subgoals") {
  const auto inst = stp_instance(4, 40, 2);
  const auto dom = make_domain(inst);
  const State s = dom->initial_state();
  for (int lookahead : {0, 100}) {
    const auto p = proposals(json{{"kind", "greedy-rollout"}, {"horizon", 8}, {"max_proposals", 3},
                                  {"lookahead", lookahead}},
                             inst, s);
    REQUIRE_FALSE(p.empty());
    for (const auto& prop : p) {
      CHECK(prop.valid);
      CHECK(prop.actions.size() <= 8);
      CHECK(*replay(*dom, s, prop.actions) == prop.target);
    }
  }
}

TEST_CASE("demonstrations without noise are optimal and reproducible") {
  const json params{{"width", 3}, {"walk_length", 20}};
  const auto a = build_demo_dataset(DomainId::Stp, params, 10, 5, 0.0);
  const auto b = build_demo_dataset(DomainId::Stp, params, 10, 5, 0.0);
  CHECK(to_jsonl(a) == to_jsonl(b));
  for (const auto& t : a.trajectories) {
    const auto inst = generate_instance(t.domain, t.params, t.seed);
    const auto dom = make_domain(inst);
    CHECK(static_cast<int>(t.actions.size()) == oracle::bfs_solve(*dom, dom->initial_state())->optimal_length);
    CHECK(dom->is_goal(*replay(*dom, dom->initial_state(), t.actions)));
  }
  CHECK(to_jsonl(dataset_from_jsonl(to_jsonl(a))) == to_jsonl(a));
}

TEST_CASE("noisy demonstrations are no shorter than optimal and still reach the goal") {
  const json params{{"width", 3}, {"walk_length", 20}};
  const auto d = build_demo_dataset(DomainId::Stp, params, 20, 5, 0.2);
  double total = 0.0, optimal = 0.0;
  for (const auto& t : d.trajectories) {
    const auto inst = generate_instance(t.domain, t.params, t.seed);
    const auto dom = make_domain(inst);
    CHECK(dom->is_goal(*replay(*dom, dom->initial_state(), t.actions)));
    total += static_cast<double>(t.actions.size());
    optimal += oracle::bfs_solve(*dom, dom->initial_state())->optimal_length;
  }
  CHECK(total >= optimal);
  CHECK_THROWS_AS(build_demo_dataset(DomainId::Stp, params, 1, 5, 0.7), Error);
}

TEST_CASE("segment index strides and coverage masking") {
  const json params{{"width", 3}, {"walk_length", 20}};
  const auto data = build_demo_dataset(DomainId::Stp, params, 5, 3, 0.0);
  std::size_t steps = 0;
  for (const auto& t : data.trajectories) steps += t.actions.size();

  const auto whole = SegmentIndex::build(data, 1000);
  CHECK(whole.size() == data.trajectories.size());

  const auto single = std::make_shared<const SegmentIndex>(SegmentIndex::build(data, 1));
  CHECK(single->size() <= steps);

  const auto& t0 = data.trajectories.front();
  const auto inst = generate_instance(t0.domain, t0.params, t0.seed);
  const State s0 = make_domain(inst)->initial_state();
  const auto one = proposals(json{{"kind", "demo-segment"}, {"horizon", 1}}, inst, s0, {single});
  REQUIRE(one.size() == 1);
  CHECK(one[0].actions == std::vector<Action>{t0.actions.front()});

  const auto none = proposals(json{{"kind", "demo-segment"}, {"horizon", 1}, {"coverage", 0.0}}, inst, s0, {single});
  CHECK(none.empty());

  int kept = 0;
  for (std::uint64_t k = 0; k < 10000; ++k) kept += segment_key_kept(k, 99, 0.3) ? 1 : 0;
  CHECK(kept > 2700);
  CHECK(kept < 3300);
}

TEST_CASE("generator config validation") {
  CHECK_THROWS_AS(config(json{{"kind", "oracle"}}), Error);
  CHECK_THROWS_AS(config(json{{"kind", "macro"}, {"horizon", 0}}), Error);
  CHECK_THROWS_AS(config(json{{"kind", "macro"}, {"horizon", 2}, {"catalog", {"EEE"}}}), Error);
  CHECK_THROWS_AS(config(json{{"kind", "demo-segment"}, {"coverage", 1.5}}), Error);
  CHECK_THROWS_AS(config(json{{"kind", "greedy-rollout"}, {"lookahead", -1}}), Error);
  const auto c = config(json{{"kind", "greedy-rollout"}, {"horizon", 8}, {"lookahead", 5}});
  CHECK(config(to_json(c)).lookahead == 5);
  const auto inst = stp_instance(3, 5, 1);
  CHECK_THROWS_AS(make_generator(config(json{{"kind", "demo-segment"}}), inst, make_domain(inst)), Error);
}
