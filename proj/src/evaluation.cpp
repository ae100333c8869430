#include "subsearch/evaluation.hpp"

#include <cmath>

namespace subsearch {

EvalKind parse_eval_kind(std::string_view name) {
  if (name == "phs-star-scaled") return EvalKind::PhsStarScaled;
  if (name == "levin-ts") return EvalKind::LevinTs;
  if (name == "phs-depth") return EvalKind::PhsDepth;
  if (name == "phs-dist") return EvalKind::PhsDist;
  if (name == "gbfs") return EvalKind::Gbfs;
  if (name == "astar-dist") return EvalKind::AStarDist;
  throw Error(ErrorCode::Config, "unknown evaluation function '" + std::string(name) + "'");
}

std::string_view to_string(EvalKind k) {
  switch (k) {
    case EvalKind::PhsStarScaled: return "phs-star-scaled";
    case EvalKind::LevinTs: return "levin-ts";
    case EvalKind::PhsDepth: return "phs-depth";
    case EvalKind::PhsDist: return "phs-dist";
    case EvalKind::Gbfs: return "gbfs";
    case EvalKind::AStarDist: return "astar-dist";
  }
  return "?";
}

double heuristic_factor(const NodeFields& n, double h) {
  if (n.dist <= 0) throw Error(ErrorCode::ZeroDist, "heuristic factor needs dist > 0");
  const double r = h / n.dist;
  return std::log1p(r) - r * n.log_pi;
}

double pi_star_estimate(const NodeFields& n, double h) {
  if (n.dist <= 0) throw Error(ErrorCode::ZeroDist, "pi* estimate needs dist > 0");
  return (1.0 + h / n.dist) * n.log_pi;
}

double eval_value(EvalKind kind, const NodeFields& n, double h) {
  if (h < 0.0 || std::isnan(h)) throw Error(ErrorCode::NegativeHeuristic, "heuristic value is negative");
  if (n.g == 0) return kNegInf;
  switch (kind) {
    case EvalKind::PhsStarScaled:
      return std::log(static_cast<double>(n.g)) + heuristic_factor(n, h) - n.log_pi;
    case EvalKind::LevinTs:
      return std::log(static_cast<double>(n.g)) - n.log_pi;
    case EvalKind::PhsDepth:
      return std::log(n.g + h) - n.log_pi;
    case EvalKind::PhsDist:
      return std::log(n.dist + h) - n.log_pi;
    case EvalKind::Gbfs:
      return h;
    case EvalKind::AStarDist:
      return n.dist + h;
  }
  return 0.0;
}

PriorityKey eval_node(EvalKind kind, const NodeFields& n, double h, std::uint32_t tier,
                      std::uint64_t fifo) {
  return {tier, eval_value(kind, n, h), fifo};
}

double domain_h(const Domain& domain, const State& s) {
  const double h = domain.heuristic(s);
  return h > 0.0 ? h : 0.0;
}

}  // namespace subsearch
