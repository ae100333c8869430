#pragma once

#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "subsearch/domain.hpp"

namespace subsearch {

enum class EdgeKind : std::uint8_t { Root, LowLevel, Subgoal };

struct EdgeLabel {
  EdgeKind kind = EdgeKind::Root;
  int index = 0;  // position in the context's legal-action or proposal list

  friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
};

// Everything a policy may look at while scoring the children of one state.
// Heuristic values are already clamped to be non-negative.
struct ExpansionContext {
  std::uint64_t instance_fp = 0;
  State state;
  double h_state = 0.0;
  std::span<const Action> legal_actions;
  std::span<const double> legal_h;     // h(T(s, a)) per legal action
  std::span<const double> proposal_h;  // h(target) per proposal
};

// Action counts observed in demonstrations, keyed by (instance, state).
class DemoTable {
 public:
  void add(std::uint64_t instance_fp, const State& s, Action a);
  const std::array<std::uint32_t, kNumActions>* find(std::uint64_t instance_fp,
                                                     const State& s) const;
  std::size_t size() const { return counts_.size(); }

 private:
  std::unordered_map<std::uint64_t, std::array<std::uint32_t, kNumActions>> counts_;
};

enum class LowPolicyKind { Uniform, BoltzmannHeuristic, DemoTable };
enum class HighPolicyKind { Uniform, BoltzmannProgress };

struct LowLevelPolicy {
  LowPolicyKind kind = LowPolicyKind::Uniform;
  double temperature = 1.0;
  std::shared_ptr<const DemoTable> table;

  // log pi_BC over ctx.legal_actions.
  std::vector<double> log_probs(const ExpansionContext& ctx) const;
};

struct HighLevelPolicy {
  HighPolicyKind kind = HighPolicyKind::Uniform;
  double temperature = 1.0;

  // log pi_SG over the proposals described by ctx.proposal_h.
  std::vector<double> log_probs(const ExpansionContext& ctx) const;
};

struct MixedPolicy {
  double epsilon = 0.1;
  bool to_zero = false;  // the epsilon -> 0 limit, ordered by tier
  bool include_low_level = true;
  LowLevelPolicy low;
  HighLevelPolicy high;

  void validate() const;
};

// Log-probabilities of every edge at one state. An edge with -inf is excluded.
// `low_has_epsilon` tells whether the low-level edges carry an epsilon factor
// (false when no proposals exist and all mass falls on low-level actions).
struct EdgeLogProbs {
  std::vector<double> low;
  std::vector<double> high;
  bool low_has_epsilon = false;
};

EdgeLogProbs mixed_log_probs(const MixedPolicy& policy, const ExpansionContext& ctx);

double edge_log_prob(const MixedPolicy& policy, const ExpansionContext& ctx, EdgeLabel edge);

// Probabilities over the edges that survive (finite log-probability). In
// to-zero mode this is the limit distribution: all mass on proposals when any
// exist.
std::vector<std::pair<EdgeLabel, double>> normalized_distribution(const MixedPolicy& policy,
                                                                  const ExpansionContext& ctx);

// Softmax in log space.
std::vector<double> log_softmax(std::span<const double> scores);

LowPolicyKind parse_low_policy(std::string_view name);
HighPolicyKind parse_high_policy(std::string_view name);
std::string_view to_string(LowPolicyKind k);
std::string_view to_string(HighPolicyKind k);

}  // namespace subsearch
