#include <doctest.h>

#include "subsearch/domains.hpp"
#include "subsearch/oracle.hpp"
#include "support.hpp"

using namespace subsearch;

namespace {

State stp(int width, std::vector<std::uint8_t> tiles) { return StpDomain::encode(width, tiles); }

}  // namespace

TEST_CASE("sliding-tile goal, heuristic and legal moves") {
  StpDomain d(3, {0, 1, 2, 3, 4, 5, 6, 7, 8});
  const State goal = d.initial_state();
  CHECK(d.is_goal(goal));
  CHECK(d.heuristic(goal) == 0.0);
  CHECK(d.legal_actions(goal).size() == 2);  // blank in a corner
  const State center = stp(3, {1, 2, 3, 4, 0, 5, 6, 7, 8});
  CHECK(d.legal_actions(center).size() == 4);

  // One move from the goal: tile 1 sits where the blank belongs.
  const State one = stp(3, {1, 0, 2, 3, 4, 5, 6, 7, 8});
  CHECK(d.heuristic(one) == 1.0);
  CHECK(d.is_goal(*d.apply(one, Action::West)));

  // Tiles 1 and 2 swapped (not reachable, but the heuristic is defined): 1 + 1.
  const State swapped = stp(3, {0, 2, 1, 3, 4, 5, 6, 7, 8});
  CHECK(d.heuristic(swapped) == 2.0);
}

TEST_CASE("sliding-tile blank moving east pulls the right neighbour left") {
  StpDomain d(3, {0, 1, 2, 3, 4, 5, 6, 7, 8});
  const auto next = d.apply(d.initial_state(), Action::East);
  REQUIRE(next);
  const auto tiles = d.tiles(*next);
  CHECK(tiles[0] == 1);
  CHECK(tiles[1] == 0);
  CHECK_FALSE(d.apply(d.initial_state(), Action::North));
}

TEST_CASE("sliding-tile constructor rejects malformed boards") {
  CHECK_THROWS_AS(StpDomain(3, {0, 1, 2, 3, 4, 5, 6, 7, 7}), Error);
  CHECK_THROWS_AS(StpDomain(3, {0, 2, 1, 3, 4, 5, 6, 7, 8}), Error);  // odd parity
  CHECK_THROWS_AS(StpDomain(6, std::vector<std::uint8_t>(36, 0)), Error);
}

TEST_CASE("instance generation is deterministic and solvable") {
  const json p{{"width", 3}, {"walk_length", 20}};
  const auto a = generate_instance(DomainId::Stp, p, 7);
  const auto b = generate_instance(DomainId::Stp, p, 7);
  CHECK(to_json(a) == to_json(b));
  CHECK(to_json(a) != to_json(generate_instance(DomainId::Stp, p, 8)));
  const auto dom = make_domain(a);
  CHECK(oracle::bfs_solve(*dom, dom->initial_state()).has_value());
}

TEST_CASE("every domain's generation witness reaches a goal and survives JSON") {
  const std::vector<std::pair<DomainId, json>> cases{
      {DomainId::Stp, {{"width", 4}, {"walk_length", 30}}},
      {DomainId::Sokoban, {{"width", 8}, {"height", 8}, {"boxes", 2}}},
      {DomainId::BoxWorld, {{"width", 8}, {"height", 8}, {"chain_length", 2}, {"distractors", 2}}},
      {DomainId::Tsp, {{"width", 6}, {"height", 6}, {"cities", 6}}},
  };
  for (const auto& [id, params] : cases) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      CAPTURE(to_string(id));
      CAPTURE(seed);
      const Instance inst = generate_instance(id, params, seed);
      const Instance back = instance_from_json(json::parse(to_json(inst).dump()));
      CHECK(to_json(back) == to_json(inst));
      CHECK(back.fingerprint() == inst.fingerprint());
      const auto dom = make_domain(back);
      const auto end = replay(*dom, dom->initial_state(), inst.witness);
      REQUIRE(end);
      CHECK(dom->is_goal(*end));
      CHECK(dom->heuristic(*end) == 0.0);
      CHECK(dom->heuristic(dom->initial_state()) >= 0.0);
    }
  }
}

TEST_CASE("generator parameters outside their range are rejected") {
  CHECK_THROWS_AS(generate_instance(DomainId::Stp, json{{"width", 9}}, 1), Error);
  CHECK_THROWS_AS(generate_instance(DomainId::Tsp, json{{"cities", 40}}, 1), Error);
  try {
    generate_instance(DomainId::Sokoban, json{{"boxes", 0}}, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParamsOutOfRange);
  }
}

TEST_CASE("sokoban pushes, walls and goal") {
  const auto d = SokobanDomain::from_ascii({
      "######",
      "#@$. #",
      "######",
  });
  const State s = d->initial_state();
  CHECK_FALSE(d->is_goal(s));
  CHECK(d->heuristic(s) >= 1.0);  // box adjacent to its target, player behind it
  const auto pushed = d->apply(s, Action::East);
  REQUIRE(pushed);
  CHECK(d->is_goal(*pushed));
  CHECK(d->heuristic(*pushed) == 0.0);
  // A second push runs the box into the wall side of the corridor end.
  const auto again = d->apply(*pushed, Action::East);
  REQUIRE(again);
  CHECK_FALSE(d->apply(*again, Action::East));
}

TEST_CASE("sokoban legal actions agree with the transition function on a deadlocked board") {
  const auto d = SokobanDomain::from_ascii({
      "#####",
      "#$  #",
      "# @.#",
      "#####",
  });
  const State s = d->initial_state();
  std::vector<Action> brute;
  for (Action a : kAllActions) {
    if (d->apply(s, a)) brute.push_back(a);
  }
  CHECK(d->legal_actions(s) == brute);
  CHECK_FALSE(oracle::bfs_solve(*d, s).has_value());
}

TEST_CASE("box-world lock opens with the matching key and hands over its content") {
  // 6x6 room; row 1 holds agent, loose key (color 3) and a lock (3 -> 5);
  // the gem lock (color 5) sits below the first lock.
  BoxWorldDomain d(6, 6, 7, {{8, 3}}, {{9, 3, 5}, {15, 5, BoxWorldDomain::kGem}}, {0, 1});
  State s = d.initial_state();
  CHECK_FALSE(d.held_key(s));
  s = *d.apply(s, Action::East);
  CHECK(d.held_key(s) == 3);
  s = *d.apply(s, Action::East);
  CHECK(d.lock_open(s, 0));
  CHECK(d.held_key(s) == 5);
  CHECK_FALSE(d.is_goal(s));
  s = *d.apply(s, Action::South);
  CHECK(d.is_goal(s));
  CHECK_FALSE(d.held_key(s));
}

TEST_CASE("box-world refuses a lock without the right key") {
  BoxWorldDomain d(6, 6, 8, {{7, 4}}, {{9, 3, BoxWorldDomain::kGem}}, {0});
  CHECK_FALSE(d.apply(d.initial_state(), Action::East));
  CHECK_FALSE(d.apply(d.initial_state(), Action::North));  // outer wall
}

TEST_CASE("box-world out-of-distribution layouts carry long distractor branches") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst =
        generate_instance(DomainId::BoxWorld, json{{"ood", true}, {"distractors", 4}}, seed);
    const auto d = BoxWorldDomain::from_instance(inst);
    const auto lengths = d->distractor_chain_lengths();
    CHECK(std::any_of(lengths.begin(), lengths.end(), [](int l) { return l >= 2; }));
  }
}

TEST_CASE("tsp goal needs every city and the return home") {
  TspDomain d(3, 3, {0, 2, 6}, 0, 0, 1);
  const State s = d.initial_state();
  CHECK_FALSE(d.is_goal(s));
  CHECK(d.heuristic(s) > 0.0);
  const State home = d.make_state(0, 0b111);
  CHECK(d.is_goal(home));
  CHECK(d.heuristic(home) == 0.0);
  CHECK_FALSE(d.is_goal(d.make_state(4, 0b111)));
  CHECK(d.heuristic(d.make_state(4, 0b111)) > 0.0);
}

TEST_CASE("admissible bounds never exceed true distances") {
  for (DomainId id : {DomainId::Stp, DomainId::Tsp, DomainId::BoxWorld, DomainId::Sokoban}) {
    json params = json::object();
    if (id == DomainId::Stp) params = {{"width", 3}, {"walk_length", 14}};
    if (id == DomainId::Tsp) params = {{"width", 5}, {"height", 5}, {"cities", 5}};
    if (id == DomainId::BoxWorld) params = {{"width", 8}, {"height", 8}, {"chain_length", 2}, {"distractors", 1}};
    if (id == DomainId::Sokoban) params = {{"width", 6}, {"height", 6}, {"boxes", 1}, {"walls", 0}};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto inst = generate_instance(id, params, seed);
      const auto dom = make_domain(inst);
      const auto opt = oracle::bfs_solve(*dom, dom->initial_state());
      REQUIRE(opt);
      CHECK(dom->admissible_heuristic(dom->initial_state()) <= opt->optimal_length);
    }
  }
}
