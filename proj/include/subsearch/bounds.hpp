#pragma once

#include <optional>
#include <vector>

#include "subsearch/search.hpp"

namespace subsearch {

inline constexpr double kBoundSlack = 1e-9;

// All bounds are kept in log space. A bound that was not computed is NaN.
struct BoundReport {
  std::uint64_t expansions = 0;
  std::uint64_t search_loss = 0;  // expansions before the solution pop
  // Loss the bounds are stated in: the root expansion is free, so path loss
  // equals depth and matches the g used by the evaluation functions.
  std::uint64_t bound_loss = 0;
  double log_bound_general = std::numeric_limits<double>::quiet_NaN();
  double log_bound_witness_path = std::numeric_limits<double>::quiet_NaN();
  double log_bound_witness = std::numeric_limits<double>::quiet_NaN();
  bool holds_general = false;
  bool holds_witness_path = false;
  bool holds_witness = false;
  bool witness_path_approximate = false;  // fringe at termination stands in for the witness fringe
  bool unbounded = false;               // epsilon -> 0: the bounds diverge
  bool dedup = false;
  std::size_t fringe_size = 0;
  double log_fringe_mass = kNegInf;  // log of sum of pi over the fringe
  std::optional<std::vector<Action>> witness;
};

json to_json(const BoundReport& r);

// log(L) <= log(B) with relative slack.
bool bound_holds(std::uint64_t loss, double log_bound);

// Running max of the evaluation value along the root path (-inf at the root).
double phi_plus(const NodeStore& tree, std::uint32_t node, EvalKind eval);
// log eta+ = log phi+ + log pi - log g; zero at the root.
double log_eta_plus(const NodeStore& tree, std::uint32_t node, EvalKind eval);

// The general bound for the returned solution node.
BoundReport check_general_bound(const SearchOutcome& outcome, EvalKind eval);

// Witness-based bounds for the hypothetical pure low-level node reached by
// `witness`. The general form needs an instrumented outcome.
BoundReport check_witness_path_bound(const SearchOutcome& outcome, const ChildExpander& expander, EvalKind eval,
                             std::span<const Action> witness);
BoundReport check_witness_bound(const SearchOutcome& outcome, const ChildExpander& expander,
                             std::span<const Action> witness);

// log g(n_hat) - N log eps - sum log pi_BC(a_i | s_i) along the witness.
double log_witness_bound(const ChildExpander& expander, std::span<const Action> witness);

}  // namespace subsearch
