#pragma once

#include <memory>

#include "subsearch/search.hpp"

namespace subsearch::testing {

// Complete binary tree of fixed depth. North takes the left child, South the
// right one. State bytes: depth, index within the level.
class BinaryTree final : public Domain {
 public:
  BinaryTree(int depth, int goal_leaf) : depth_(depth), goal_(goal_leaf) {}

  DomainId id() const override { return DomainId::Stp; }
  State initial_state() const override {
    const std::uint8_t b[2] = {0, 0};
    return State(b);
  }
  std::optional<State> apply(const State& s, Action a) const override {
    if (s[0] >= depth_ || (a != Action::North && a != Action::South)) return std::nullopt;
    const std::uint8_t b[2] = {static_cast<std::uint8_t>(s[0] + 1),
                               static_cast<std::uint8_t>(2 * s[1] + (a == Action::South ? 1 : 0))};
    return State(b);
  }
  bool is_goal(const State& s) const override { return s[0] == depth_ && s[1] == goal_; }
  double heuristic(const State& s) const override { return is_goal(s) ? 0.0 : depth_ - s[0]; }
  double admissible_heuristic(const State& s) const override { return heuristic(s); }
  void validate(const State&) const override {}
  std::string describe(const State& s) const override {
    return std::to_string(s[0]) + ":" + std::to_string(s[1]);
  }

 private:
  int depth_;
  int goal_;
};

inline Instance tree_instance() {
  Instance inst;
  inst.domain = DomainId::Stp;
  inst.initial = json{{"toy", "binary-tree"}};
  return inst;
}

inline ChildExpander low_level_expander(std::shared_ptr<const Domain> dom, double epsilon = 1.0,
                                        LowPolicyKind low = LowPolicyKind::Uniform) {
  ChildExpander e;
  e.domain = std::move(dom);
  e.policy.epsilon = epsilon;
  e.policy.low.kind = low;
  return e;
}

inline Instance stp_instance(int width, int walk, std::uint64_t seed) {
  return generate_instance(DomainId::Stp, json{{"width", width}, {"walk_length", walk}}, seed);
}

}  // namespace subsearch::testing
