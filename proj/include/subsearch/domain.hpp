#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "subsearch/common.hpp"

namespace subsearch {

using json = nlohmann::json;

enum class DomainId { Stp, Sokoban, BoxWorld, Tsp };

std::string_view to_string(DomainId id);
DomainId parse_domain(std::string_view name);

// A serialized puzzle. `initial` holds the domain's compact encoding of the
// start state together with any static layout (walls, targets, locks, cities).
// `witness` is a goal-reaching action sequence recorded by the generator.
struct Instance {
  DomainId domain = DomainId::Stp;
  std::uint64_t seed = 0;
  json params = json::object();
  json initial = json::object();
  std::vector<Action> witness;

  // Stable identity of the puzzle layout and start state.
  std::uint64_t fingerprint() const;
};

json to_json(const Instance& instance);
Instance instance_from_json(const json& j);

struct LegalMoves {
  std::array<Action, kNumActions> actions{};
  std::array<State, kNumActions> successors{};
  int count = 0;
};

// Deterministic, fully observable transition system for one instance.
// Implementations are immutable after construction.
class Domain {
 public:
  virtual ~Domain() = default;

  virtual DomainId id() const = 0;
  virtual State initial_state() const = 0;

  // Successor of `s` under `a`, or nullopt when the move is illegal.
  virtual std::optional<State> apply(const State& s, Action a) const = 0;
  virtual bool is_goal(const State& s) const = 0;

  // Non-negative estimate of the remaining low-level actions; zero at goals.
  virtual double heuristic(const State& s) const = 0;
  // Lower bound on the remaining low-level actions.
  virtual double admissible_heuristic(const State& s) const = 0;
  // True when heuristic() itself is documented admissible.
  virtual bool heuristic_is_admissible() const { return false; }

  // Validates an encoded state; throws InvalidInstance when malformed.
  virtual void validate(const State& s) const = 0;
  virtual std::string describe(const State& s) const = 0;

  LegalMoves legal_moves(const State& s) const;
  std::vector<Action> legal_actions(const State& s) const;
};

std::shared_ptr<const Domain> make_domain(const Instance& instance);
Instance generate_instance(DomainId domain, const json& params, std::uint64_t seed);

// Replays `actions` from `s`; nullopt as soon as one step is illegal.
std::optional<State> replay(const Domain& domain, State s,
                            std::span<const Action> actions);

bool goal_test(const Domain& domain, const State& s);

}  // namespace subsearch
