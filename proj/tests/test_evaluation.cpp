#include <doctest.h>

#include <cmath>

#include "subsearch/evaluation.hpp"

using namespace subsearch;

TEST_CASE("scaled evaluation on a hand-computed node") {
  const NodeFields n{2, 2, std::log(0.25)};
  CHECK(eval_value(EvalKind::PhsStarScaled, n, 4.0) == doctest::Approx(std::log(384.0)));
  CHECK(std::exp(heuristic_factor(n, 4.0)) == doctest::Approx(48.0));
  CHECK(std::exp(pi_star_estimate(n, 4.0)) == doctest::Approx(0.015625));
}

TEST_CASE("evaluation variants") {
  CHECK(std::exp(eval_value(EvalKind::LevinTs, {3, 3, std::log(0.125)}, 7.0)) == doctest::Approx(24.0));
  const NodeFields n{3, 2, std::log(0.5)};
  CHECK(eval_value(EvalKind::PhsDepth, n, 1.0) == doctest::Approx(std::log(4.0) - std::log(0.5)));
  CHECK(eval_value(EvalKind::PhsDist, n, 1.0) == doctest::Approx(std::log(3.0) - std::log(0.5)));
  CHECK(eval_value(EvalKind::Gbfs, n, 1.5) == 1.5);
  CHECK(eval_value(EvalKind::AStarDist, n, 1.5) == 3.5);
}

TEST_CASE("the root gets the top sentinel priority") {
  const NodeFields root{0, 0, 0.0};
  for (EvalKind k : {EvalKind::PhsStarScaled, EvalKind::LevinTs, EvalKind::PhsDepth, EvalKind::PhsDist}) {
    CHECK(eval_value(k, root, 3.0) == kNegInf);
  }
  const auto r = eval_node(EvalKind::PhsStarScaled, root, 3.0, 0, 0);
  const auto child = eval_node(EvalKind::PhsStarScaled, {1, 1, std::log(0.25)}, 0.0, 0, 1);
  CHECK(r < child);
}

TEST_CASE("heuristic factor edge cases") {
  CHECK(heuristic_factor({2, 2, std::log(0.3)}, 0.0) == 0.0);
  CHECK(std::exp(heuristic_factor({5, 4, 0.0}, 6.0)) == doctest::Approx(2.5));
  CHECK(pi_star_estimate({2, 2, std::log(0.3)}, 0.0) == doctest::Approx(std::log(0.3)));
  CHECK(pi_star_estimate({2, 2, 0.0}, 9.0) == 0.0);
  CHECK_THROWS_AS(heuristic_factor({1, 0, 0.0}, 1.0), Error);
  CHECK_THROWS_AS(pi_star_estimate({1, 0, 0.0}, 1.0), Error);
  CHECK_THROWS_AS(eval_value(EvalKind::PhsDepth, {1, 1, 0.0}, -1.0), Error);
}

TEST_CASE("heuristic factor is at least one for non-negative h") {
  for (int dist = 1; dist <= 6; ++dist) {
    for (double h : {0.0, 0.5, 3.0, 11.0}) {
      for (double pi : {1.0, 0.7, 0.01}) {
        CHECK(heuristic_factor({dist, dist, std::log(pi)}, h) >= 0.0);
      }
    }
  }
}

TEST_CASE("priority keys order by tier, then value, then insertion") {
  CHECK(PriorityKey{0, 5.0, 9} < PriorityKey{1, -5.0, 0});
  CHECK(PriorityKey{1, -1.0, 9} < PriorityKey{1, 2.0, 0});
  CHECK(PriorityKey{1, 2.0, 3} < PriorityKey{1, 2.0, 4});
  CHECK(parse_eval_kind(to_string(EvalKind::PhsDist)) == EvalKind::PhsDist);
  CHECK_THROWS_AS(parse_eval_kind("dijkstra"), Error);
}
