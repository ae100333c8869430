#include <doctest.h>

#include <cmath>

#include "subsearch/bounds.hpp"
#include "support.hpp"

using namespace subsearch;
using namespace subsearch::testing;

namespace {

SearchOutcome run(const Instance& inst, const ChildExpander& e, EvalKind k, std::uint64_t n = 1'000'000) {
  SearchBudget b;
  b.max_expansions = n;
  return search(inst, e, k, b, {false, true});
}

std::vector<Action> leaf_path(int depth, int leaf) {
  std::vector<Action> w;
  for (int bit = depth - 1; bit >= 0; --bit) w.push_back((leaf >> bit) & 1 ? Action::South : Action::North);
  return w;
}

}  // namespace

TEST_CASE("phi+ is the running maximum along the root path") {
  NodeStore t;
  SearchNode root;
  const std::uint8_t b[1] = {0};
  root.state_id = t.intern(State(b));
  t.add(root, {});
  // LevinTS values g / pi of 5, 3, 7.
  const double phis[3] = {5.0, 3.0, 7.0};
  for (int g = 1; g <= 3; ++g) {
    SearchNode n;
    n.parent = g - 1;
    n.g = n.dist = static_cast<std::uint32_t>(g);
    n.log_pi = std::log(g / phis[g - 1]);
    t.add(n, {});
  }
  CHECK(phi_plus(t, 0, EvalKind::LevinTs) == kNegInf);
  CHECK(std::exp(phi_plus(t, 1, EvalKind::LevinTs)) == doctest::Approx(5.0));
  CHECK(std::exp(phi_plus(t, 2, EvalKind::LevinTs)) == doctest::Approx(5.0));
  CHECK(std::exp(phi_plus(t, 3, EvalKind::LevinTs)) == doctest::Approx(7.0));
  CHECK(log_eta_plus(t, 0, EvalKind::LevinTs) == 0.0);
  // eta+ at the dip: 5 * (2/3) / 2.
  CHECK(std::exp(log_eta_plus(t, 2, EvalKind::LevinTs)) == doctest::Approx(5.0 / 3.0));
  CHECK_THROWS_AS(phi_plus(t, 1, EvalKind::Gbfs), Error);
}

TEST_CASE("depth-two binary tree under LevinTS stays within g / pi = 8") {
  for (int leaf = 0; leaf < 4; ++leaf) {
    const auto inst = tree_instance();
    const auto e = low_level_expander(std::make_shared<BinaryTree>(2, leaf));
    const auto out = run(inst, e, EvalKind::LevinTs);
    REQUIRE(out.result.solved);
    CHECK(out.result.expansions <= 8);
    const auto w = leaf_path(2, leaf);
    const auto r = check_witness_bound(out, e, w);
    CHECK(std::exp(r.log_bound_witness) == doctest::Approx(8.0));
    CHECK(r.holds_witness);
    const auto general = check_general_bound(out, EvalKind::LevinTs);
    CHECK(general.holds_general);
    CHECK(general.log_fringe_mass <= 1e-12);
  }
}

TEST_CASE("uniform witness bound is N b^N at epsilon one") {
  for (int depth = 1; depth <= 6; ++depth) {
    const auto e = low_level_expander(std::make_shared<BinaryTree>(depth, 0));
    CHECK(log_witness_bound(e, leaf_path(depth, 0)) == doctest::Approx(std::log(depth) + depth * std::log(2.0)));
  }
  // eps = 0.1, three steps, uniform over two: 3 / (0.1^3 * 2^-3).
  const auto e = low_level_expander(std::make_shared<BinaryTree>(3, 5), 0.1);
  CHECK(std::exp(log_witness_bound(e, leaf_path(3, 5))) == doctest::Approx(3.0 / (1e-3 / 8.0)));
}

TEST_CASE("a root goal satisfies every bound") {
  const auto inst = stp_instance(3, 0, 1);
  const auto e = low_level_expander(make_domain(inst));
  const auto out = run(inst, e, EvalKind::PhsStarScaled);
  const auto r = check_witness_path_bound(out, e, EvalKind::PhsStarScaled, {});
  CHECK(r.expansions == 1);
  CHECK(r.bound_loss == 0);
  CHECK(r.holds_witness);
  CHECK(r.holds_witness_path);
  CHECK(check_general_bound(out, EvalKind::PhsStarScaled).holds_general);
}

TEST_CASE("the to-zero limit reports unbounded") {
  const auto inst = tree_instance();
  auto e = low_level_expander(std::make_shared<BinaryTree>(3, 2));
  e.policy.to_zero = true;
  const auto out = run(inst, e, EvalKind::LevinTs);
  const auto r = check_witness_bound(out, e, leaf_path(3, 2));
  CHECK(r.unbounded);
  CHECK_FALSE(r.holds_witness);
  CHECK(std::isnan(r.log_bound_witness));
}

TEST_CASE("bound checks reject bad inputs") {
  const auto inst = tree_instance();
  const auto e = low_level_expander(std::make_shared<BinaryTree>(3, 2));
  SearchBudget b;
  const auto plain = search(inst, e, EvalKind::LevinTs, b, {false, false});
  CHECK_THROWS_AS(check_general_bound(plain, EvalKind::LevinTs), Error);
  const auto out = run(inst, e, EvalKind::LevinTs);
  try {
    check_witness_bound(out, e, leaf_path(3, 1));
    FAIL("expected an invalid witness");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::InvalidWitness);
  }
  CHECK_THROWS_AS(check_witness_bound(out, e, actions_from_string("E")), Error);
  CHECK_THROWS_AS(check_general_bound(out, EvalKind::AStarDist), Error);
}

TEST_CASE("bounds hold on small sliding-tile runs with subgoals") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto inst = stp_instance(3, 6, seed);
    for (double eps : {1.0, 0.5}) {
      for (EvalKind k : {EvalKind::LevinTs, EvalKind::PhsStarScaled}) {
        CAPTURE(seed);
        CAPTURE(eps);
        auto e = low_level_expander(make_domain(inst), eps, LowPolicyKind::BoltzmannHeuristic);
        e.generator = make_generator(
            generator_config_from_json(json{{"kind", "greedy-rollout"}, {"horizon", 4}, {"max_proposals", 2}}), inst,
            e.domain);
        e.seed = inst.seed;
        const auto out = run(inst, e, k);
        REQUIRE(out.result.solved);
        const auto general = check_general_bound(out, k);
        CHECK(general.holds_general);
        CHECK(general.log_fringe_mass <= 1e-9);
        const auto w = check_witness_path_bound(out, e, k, inst.witness);
        if (!w.witness_path_approximate) CHECK(w.holds_witness_path);
        if (k == EvalKind::LevinTs) CHECK(w.holds_witness);

        // phi+ never decreases and eta+ >= 1 when eta >= 1.
        const auto& t = *out.tree;
        for (std::uint32_t i = 1; i < t.size(); ++i) {
          const auto p = static_cast<std::uint32_t>(t.node(i).parent);
          CHECK(phi_plus(t, i, k) >= phi_plus(t, p, k));
          CHECK(log_eta_plus(t, i, k) >= -1e-9);
        }
      }
    }
  }
}
