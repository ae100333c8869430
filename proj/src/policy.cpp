#include "subsearch/policy.hpp"

#include <algorithm>
#include <cmath>

namespace subsearch {

namespace {

std::uint64_t table_key(std::uint64_t fp, const State& s) { return hash_combine(fp, s.hash()); }

}  // namespace

void DemoTable::add(std::uint64_t instance_fp, const State& s, Action a) {
  auto& c = counts_[table_key(instance_fp, s)];
  ++c[static_cast<int>(a)];
}

const std::array<std::uint32_t, kNumActions>* DemoTable::find(std::uint64_t instance_fp,
                                                              const State& s) const {
  auto it = counts_.find(table_key(instance_fp, s));
  return it == counts_.end() ? nullptr : &it->second;
}

std::vector<double> log_softmax(std::span<const double> scores) {
  std::vector<double> out(scores.begin(), scores.end());
  if (out.empty()) return out;
  const double z = log_sum_exp(out);
  for (double& x : out) x -= z;
  return out;
}

std::vector<double> LowLevelPolicy::log_probs(const ExpansionContext& ctx) const {
  const std::size_t n = ctx.legal_actions.size();
  if (n == 0) return {};
  std::vector<double> scores(n, 0.0);
  switch (kind) {
    case LowPolicyKind::Uniform:
      break;
    case LowPolicyKind::BoltzmannHeuristic:
      for (std::size_t i = 0; i < n; ++i) scores[i] = -ctx.legal_h[i] / temperature;
      break;
    case LowPolicyKind::DemoTable: {
      // Add-one smoothing keeps every legal action strictly positive.
      const auto* counts = table ? table->find(ctx.instance_fp, ctx.state) : nullptr;
      if (counts) {
        for (std::size_t i = 0; i < n; ++i) {
          scores[i] = std::log(1.0 + (*counts)[static_cast<int>(ctx.legal_actions[i])]);
        }
      }
      break;
    }
  }
  return log_softmax(scores);
}

std::vector<double> HighLevelPolicy::log_probs(const ExpansionContext& ctx) const {
  const std::size_t n = ctx.proposal_h.size();
  std::vector<double> scores(n, 0.0);
  if (kind == HighPolicyKind::BoltzmannProgress) {
    for (std::size_t i = 0; i < n; ++i) scores[i] = (ctx.h_state - ctx.proposal_h[i]) / temperature;
  }
  return log_softmax(scores);
}

void MixedPolicy::validate() const {
  if (!to_zero && !(epsilon > 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::Config, "epsilon must lie in (0, 1]; use \"to-zero\" for the limit");
  }
  if (!(low.temperature > 0.0) || !(high.temperature > 0.0)) {
    throw Error(ErrorCode::Config, "policy temperatures must be positive");
  }
  if (low.kind == LowPolicyKind::DemoTable && !low.table) {
    throw Error(ErrorCode::Config, "demo-table low-level policy needs a demo dataset");
  }
}

EdgeLogProbs mixed_log_probs(const MixedPolicy& policy, const ExpansionContext& ctx) {
  EdgeLogProbs out;
  if (policy.include_low_level) out.low = policy.low.log_probs(ctx);
  out.high = policy.high.log_probs(ctx);
  if (out.low.empty() || out.high.empty()) return out;
  out.low_has_epsilon = true;
  if (policy.to_zero) return out;
  const double log_eps = std::log(policy.epsilon);
  const double log_rest = policy.epsilon >= 1.0 ? kNegInf : std::log1p(-policy.epsilon);
  for (double& x : out.low) x += log_eps;
  for (double& x : out.high) x += log_rest;
  return out;
}

double edge_log_prob(const MixedPolicy& policy, const ExpansionContext& ctx, EdgeLabel edge) {
  const auto lp = mixed_log_probs(policy, ctx);
  const auto& v = edge.kind == EdgeKind::LowLevel ? lp.low : lp.high;
  if (edge.kind == EdgeKind::Root || edge.index < 0 || edge.index >= static_cast<int>(v.size())) {
    throw Error(ErrorCode::EdgeNotInContext, "edge is not a child of this expansion");
  }
  return v[edge.index];
}

std::vector<std::pair<EdgeLabel, double>> normalized_distribution(const MixedPolicy& policy,
                                                                  const ExpansionContext& ctx) {
  const auto lp = mixed_log_probs(policy, ctx);
  std::vector<std::pair<EdgeLabel, double>> out;
  // In the limit every epsilon-weighted low-level edge has vanishing mass.
  const bool drop_low = policy.to_zero && lp.low_has_epsilon;
  if (!drop_low) {
    for (std::size_t i = 0; i < lp.low.size(); ++i) {
      if (lp.low[i] > kNegInf) out.push_back({{EdgeKind::LowLevel, static_cast<int>(i)}, std::exp(lp.low[i])});
    }
  }
  for (std::size_t i = 0; i < lp.high.size(); ++i) {
    if (lp.high[i] > kNegInf) out.push_back({{EdgeKind::Subgoal, static_cast<int>(i)}, std::exp(lp.high[i])});
  }
  if (out.empty()) throw Error(ErrorCode::NoLegalEdges, "state has no legal edges");
  return out;
}

LowPolicyKind parse_low_policy(std::string_view name) {
  if (name == "uniform") return LowPolicyKind::Uniform;
  if (name == "boltzmann") return LowPolicyKind::BoltzmannHeuristic;
  if (name == "demo-table") return LowPolicyKind::DemoTable;
  throw Error(ErrorCode::Config, "unknown low-level policy '" + std::string(name) + "'");
}

HighPolicyKind parse_high_policy(std::string_view name) {
  if (name == "uniform") return HighPolicyKind::Uniform;
  if (name == "boltzmann-progress") return HighPolicyKind::BoltzmannProgress;
  throw Error(ErrorCode::Config, "unknown high-level policy '" + std::string(name) + "'");
}

std::string_view to_string(LowPolicyKind k) {
  switch (k) {
    case LowPolicyKind::Uniform: return "uniform";
    case LowPolicyKind::BoltzmannHeuristic: return "boltzmann";
    case LowPolicyKind::DemoTable: return "demo-table";
  }
  return "?";
}

std::string_view to_string(HighPolicyKind k) {
  switch (k) {
    case HighPolicyKind::Uniform: return "uniform";
    case HighPolicyKind::BoltzmannProgress: return "boltzmann-progress";
  }
  return "?";
}

}  // namespace subsearch
