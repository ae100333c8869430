#pragma once

#include <cstdint>
#include <string_view>

#include "subsearch/domain.hpp"

namespace subsearch {

enum class EvalKind { PhsStarScaled, LevinTs, PhsDepth, PhsDist, Gbfs, AStarDist };

EvalKind parse_eval_kind(std::string_view name);
std::string_view to_string(EvalKind k);
// LevinTS ignores the heuristic.
inline bool uses_heuristic(EvalKind k) { return k != EvalKind::LevinTs; }

// Lexicographic (tier, value, fifo). `value` is log phi for the PHS family and
// the raw score for GBFS and A*.
struct PriorityKey {
  std::uint32_t tier = 0;
  double value = 0.0;
  std::uint64_t fifo = 0;

  friend bool operator<(const PriorityKey& a, const PriorityKey& b) {
    if (a.tier != b.tier) return a.tier < b.tier;
    if (a.value != b.value) return a.value < b.value;
    return a.fifo < b.fifo;
  }
};

struct NodeFields {
  int g = 0;
  int dist = 0;
  double log_pi = 0.0;
};

// Evaluation value of a node. The root (g = 0) gets -inf.
double eval_value(EvalKind kind, const NodeFields& n, double h);
PriorityKey eval_node(EvalKind kind, const NodeFields& n, double h, std::uint32_t tier,
                      std::uint64_t fifo);

// log eta_hat = log(1 + h/dist) - (h/dist) log pi.
double heuristic_factor(const NodeFields& n, double h);
// log pi(n*) estimate = (1 + h/dist) log pi.
double pi_star_estimate(const NodeFields& n, double h);

// Domain heuristic clamped to be non-negative.
double domain_h(const Domain& domain, const State& s);

}  // namespace subsearch
