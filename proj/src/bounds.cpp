#include "subsearch/bounds.hpp"

#include <cmath>

namespace subsearch {

namespace {

json log_or_null(double x) { return std::isnan(x) ? json(nullptr) : std::isfinite(x) ? json(x) : json(x > 0 ? "inf" : "-inf"); }

std::uint64_t root_free_loss(const SearchResult& r) { return r.expansions >= 2 ? r.expansions - 2 : 0; }

void require_phs_family(EvalKind eval) {
  if (eval == EvalKind::Gbfs || eval == EvalKind::AStarDist) {
    throw Error(ErrorCode::InvalidArgument, "bounds apply to the PHS family of evaluation functions");
  }
}

// phi+ for every node; parents always precede their children in the store.
std::vector<double> all_phi_plus(const NodeStore& tree, EvalKind eval) {
  std::vector<double> out(tree.size());
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    const auto& n = tree.node(i);
    const double phi = eval_value(eval, n.fields(), n.h);
    out[i] = n.parent == kNoParent ? phi : std::max(phi, out[static_cast<std::uint32_t>(n.parent)]);
  }
  return out;
}

double eta_plus_from(double log_phi_plus, const SearchNode& n) {
  if (n.g == 0) return 0.0;
  return log_phi_plus + n.log_pi - std::log(static_cast<double>(n.g));
}

// log of sum over the fringe of pi(n) / eta+(n).
double fringe_sum(const SearchOutcome& o, const std::vector<double>& phip) {
  std::vector<double> terms;
  for (auto id : o.result.fringe_at_solution) {
    const auto& n = o.tree->node(id);
    terms.push_back(n.log_pi - eta_plus_from(phip[id], n));
  }
  return log_sum_exp(terms);
}

void fill_fringe(BoundReport& r, const SearchOutcome& o) {
  r.fringe_size = o.result.fringe_at_solution.size();
  std::vector<double> pis;
  for (auto id : o.result.fringe_at_solution) pis.push_back(o.tree->node(id).log_pi);
  r.log_fringe_mass = log_sum_exp(pis);
}

BoundReport base_report(const SearchOutcome& o, const ChildExpander& expander) {
  BoundReport r;
  r.expansions = o.result.expansions;
  r.search_loss = o.result.search_loss();
  r.bound_loss = root_free_loss(o.result);
  r.unbounded = expander.policy.to_zero;
  return r;
}

struct WitnessPath {
  std::vector<State> states;
  std::vector<double> log_pi_bc;  // per step
};

WitnessPath replay_witness(const ChildExpander& expander, std::span<const Action> witness) {
  const Domain& dom = *expander.domain;
  WitnessPath w;
  w.states.push_back(dom.initial_state());
  for (Action a : witness) {
    const State& s = w.states.back();
    const auto moves = dom.legal_moves(s);
    std::array<double, kNumActions> hs{};
    int pick = -1;
    for (int k = 0; k < moves.count; ++k) {
      hs[k] = domain_h(dom, moves.successors[k]);
      if (moves.actions[k] == a) pick = k;
    }
    if (pick < 0) throw Error(ErrorCode::InvalidWitness, "witness contains an illegal action");
    ExpansionContext ctx{expander.instance_fp, s, domain_h(dom, s),
                         std::span<const Action>(moves.actions.data(), static_cast<std::size_t>(moves.count)),
                         std::span<const double>(hs.data(), static_cast<std::size_t>(moves.count)), {}};
    w.log_pi_bc.push_back(expander.policy.low.log_probs(ctx)[pick]);
    w.states.push_back(moves.successors[pick]);
  }
  if (!dom.is_goal(w.states.back())) throw Error(ErrorCode::InvalidWitness, "witness does not reach a goal");
  return w;
}

double log_eps(const ChildExpander& expander) { return std::log(expander.policy.epsilon); }

}  // namespace

json to_json(const BoundReport& r) {
  json j{{"expansions", r.expansions},
         {"search_loss", r.search_loss},
         {"bound_loss", r.bound_loss},
         {"log_bound_general", log_or_null(r.log_bound_general)},
         {"log_bound_witness_path", log_or_null(r.log_bound_witness_path)},
         {"log_bound_witness", log_or_null(r.log_bound_witness)},
         {"holds_general", r.holds_general},
         {"holds_witness_path", r.holds_witness_path},
         {"holds_witness", r.holds_witness},
         {"witness_path_approximate", r.witness_path_approximate},
         {"unbounded", r.unbounded},
         {"dedup", r.dedup},
         {"fringe_size", r.fringe_size},
         {"log_fringe_mass", log_or_null(r.log_fringe_mass)}};
  if (r.witness) j["witness"] = actions_to_string(*r.witness);
  return j;
}

bool bound_holds(std::uint64_t loss, double log_bound) {
  if (loss == 0) return true;
  if (std::isnan(log_bound)) return false;
  return std::log(static_cast<double>(loss)) <= log_bound + std::log1p(kBoundSlack);
}

double phi_plus(const NodeStore& tree, std::uint32_t node, EvalKind eval) {
  require_phs_family(eval);
  double best = kNegInf;
  for (std::int64_t cur = node; cur != kNoParent;) {
    if (cur < 0 || static_cast<std::size_t>(cur) >= tree.size()) {
      throw Error(ErrorCode::DanglingParent, "search tree has a dangling parent link");
    }
    const auto& n = tree.node(static_cast<std::uint32_t>(cur));
    best = std::max(best, eval_value(eval, n.fields(), n.h));
    cur = n.parent;
  }
  return best;
}

double log_eta_plus(const NodeStore& tree, std::uint32_t node, EvalKind eval) {
  return eta_plus_from(phi_plus(tree, node, eval), tree.node(node));
}

BoundReport check_general_bound(const SearchOutcome& outcome, EvalKind eval) {
  require_phs_family(eval);
  if (!outcome.tree) throw Error(ErrorCode::MissingInstrumentation, "the general bound needs an instrumented search");
  BoundReport r;
  r.expansions = outcome.result.expansions;
  r.search_loss = outcome.result.search_loss();
  r.bound_loss = root_free_loss(outcome.result);
  fill_fringe(r, outcome);
  if (!outcome.result.solved) return r;
  const auto phip = all_phi_plus(*outcome.tree, eval);
  r.log_bound_general = phip[*outcome.result.solution_node] + fringe_sum(outcome, phip);
  r.holds_general = bound_holds(r.bound_loss, r.log_bound_general);
  return r;
}

double log_witness_bound(const ChildExpander& expander, std::span<const Action> witness) {
  const auto w = replay_witness(expander, witness);
  const double n = static_cast<double>(witness.size());
  double log_pi = n * log_eps(expander);
  for (double x : w.log_pi_bc) log_pi += x;
  return std::log(n) - log_pi;
}

BoundReport check_witness_path_bound(const SearchOutcome& outcome, const ChildExpander& expander, EvalKind eval,
                             std::span<const Action> witness) {
  require_phs_family(eval);
  if (!outcome.tree) throw Error(ErrorCode::MissingInstrumentation, "the witness bound needs an instrumented search");
  BoundReport r = base_report(outcome, expander);
  r.witness = std::vector<Action>(witness.begin(), witness.end());
  fill_fringe(r, outcome);
  const auto w = replay_witness(expander, witness);
  if (r.unbounded) return r;

  // phi+ along the hypothetical pure low-level path.
  const Domain& dom = *expander.domain;
  double log_pi = 0.0;
  double phi_max = eval_value(eval, NodeFields{0, 0, 0.0}, domain_h(dom, w.states[0]));
  for (std::size_t i = 0; i < witness.size(); ++i) {
    log_pi += log_eps(expander) + w.log_pi_bc[i];
    const int depth = static_cast<int>(i + 1);
    phi_max = std::max(phi_max, eval_value(eval, NodeFields{depth, depth, log_pi}, domain_h(dom, w.states[i + 1])));
  }
  const auto phip = all_phi_plus(*outcome.tree, eval);
  r.log_bound_witness_path = witness.empty() ? kNegInf : phi_max + fringe_sum(outcome, phip);

  const auto& res = outcome.result;
  const bool same_node = res.solved && res.solution_subgoal_edges == 0 &&
                         std::equal(res.low_level_plan.begin(), res.low_level_plan.end(), witness.begin(),
                                    witness.end());
  r.witness_path_approximate = !same_node;
  r.holds_witness_path = bound_holds(r.bound_loss, r.log_bound_witness_path);
  r.log_bound_witness = log_witness_bound(expander, witness);
  r.holds_witness = bound_holds(r.bound_loss, r.log_bound_witness);
  return r;
}

BoundReport check_witness_bound(const SearchOutcome& outcome, const ChildExpander& expander,
                             std::span<const Action> witness) {
  BoundReport r = base_report(outcome, expander);
  r.witness = std::vector<Action>(witness.begin(), witness.end());
  if (outcome.tree) fill_fringe(r, outcome);
  replay_witness(expander, witness);
  if (r.unbounded) return r;
  r.log_bound_witness = log_witness_bound(expander, witness);
  r.holds_witness = outcome.result.solved && bound_holds(r.bound_loss, r.log_bound_witness);
  return r;
}

}  // namespace subsearch
