#include <doctest.h>

#include <cmath>
#include <set>

#include "subsearch/common.hpp"

using namespace subsearch;

TEST_CASE("action strings round-trip and reject unknown characters") {
  const auto acts = actions_from_string("NESW");
  CHECK(actions_to_string(acts) == "NESW");
  CHECK(inverse(Action::North) == Action::South);
  CHECK(inverse(Action::East) == Action::West);
  CHECK_THROWS_AS(actions_from_string("NX"), Error);
}

TEST_CASE("state equality and hashing look at the used prefix") {
  const std::uint8_t a[3] = {1, 2, 3};
  const std::uint8_t b[4] = {1, 2, 3, 0};
  const State sa(a), sb(b), sa2(a);
  CHECK(sa == sa2);
  CHECK(sa.hash() == sa2.hash());
  CHECK_FALSE(sa == sb);
  CHECK(sa.hash() != sb.hash());
  std::uint8_t big[kMaxStateBytes + 1] = {};
  CHECK_THROWS_AS(State(std::span<const std::uint8_t>(big, kMaxStateBytes + 1)), Error);
}

TEST_CASE("rng streams are reproducible and seeds are split by index") {
  Rng a(42), b(42), c(43);
  std::vector<std::uint64_t> xa, xb, xc;
  for (int i = 0; i < 16; ++i) {
    xa.push_back(a.next());
    xb.push_back(b.next());
    xc.push_back(c.next());
  }
  CHECK(xa == xb);
  CHECK(xa != xc);
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(derive_seed(7, i));
  CHECK(seeds.size() == 1000);
}

TEST_CASE("bounded draws stay in range and cover it") {
  Rng r(5);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto x = r.below(7);
    REQUIRE(x < 7);
    ++hits[x];
  }
  for (int h : hits) CHECK(h > 800);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  CHECK_THROWS_AS(r.below(0), Error);
}

TEST_CASE("log_sum_exp handles empty, infinite and large inputs") {
  CHECK(log_sum_exp(std::vector<double>{}) == kNegInf);
  CHECK(log_sum_exp(std::vector<double>{kNegInf, kNegInf}) == kNegInf);
  CHECK(log_sum_exp(std::vector<double>{1000.0, 1000.0}) == doctest::Approx(1000.0 + std::log(2.0)));
  CHECK(log_sum_exp(std::vector<double>{std::log(0.25), std::log(0.75)}) == doctest::Approx(0.0));
}
