#include "subsearch/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <sstream>

namespace subsearch {

std::uint32_t NodeStore::intern(const State& s) {
  auto [it, inserted] = index_.emplace(s, static_cast<std::uint32_t>(states_.size()));
  if (inserted) states_.push_back(s);
  return it->second;
}

std::uint32_t NodeStore::add(SearchNode node, std::span<const Action> edge_actions) {
  node.actions_begin = static_cast<std::uint32_t>(actions_.size());
  node.actions_len = static_cast<std::uint32_t>(edge_actions.size());
  actions_.insert(actions_.end(), edge_actions.begin(), edge_actions.end());
  nodes_.push_back(node);
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

std::size_t NodeStore::memory_bytes() const {
  // Hash-map nodes carry the key plus a next pointer and cached hash; buckets
  // add one pointer per entry at load factor one.
  constexpr std::size_t kMapEntry = sizeof(State) + sizeof(std::uint32_t) + 3 * sizeof(void*);
  return nodes_.size() * sizeof(SearchNode) + states_.size() * (sizeof(State) + kMapEntry) +
         actions_.size() * sizeof(Action);
}

namespace {

std::string_view edge_name(EdgeKind k) {
  switch (k) {
    case EdgeKind::Root: return "root";
    case EdgeKind::LowLevel: return "low";
    case EdgeKind::Subgoal: return "subgoal";
  }
  return "?";
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

std::string NodeStore::dump_jsonl() const {
  std::string out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    json j{{"node_id", i},
           {"parent", n.parent},
           {"edge", {{"kind", edge_name(n.edge)}, {"index", n.edge_index},
                     {"actions", actions_to_string(edge_actions(n))}}},
           {"g", n.g},
           {"dist", n.dist},
           {"log_pi", n.log_pi},
           {"priority", {{"tier", n.priority.tier}, {"value", finite_or_null(n.priority.value)},
                         {"fifo", n.priority.fifo}}}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<Action> reconstruct_plan(std::uint32_t node, const NodeStore& tree) {
  std::vector<std::uint32_t> path;
  std::int64_t cur = node;
  while (cur != kNoParent) {
    if (cur < 0 || static_cast<std::size_t>(cur) >= tree.size() || path.size() > tree.size()) {
      throw Error(ErrorCode::DanglingParent, "search tree has a dangling parent link");
    }
    path.push_back(static_cast<std::uint32_t>(cur));
    cur = tree.node(static_cast<std::uint32_t>(cur)).parent;
  }
  std::vector<Action> plan;
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    const auto acts = tree.edge_actions(tree.node(*it));
    plan.insert(plan.end(), acts.begin(), acts.end());
  }
  return plan;
}

std::vector<Child> ChildExpander::expand(const State& s, double h_state) const {
  const Domain& dom = *domain;
  LegalMoves moves;
  if (policy.include_low_level) moves = dom.legal_moves(s);
  std::vector<SubgoalProposal> proposals;
  if (generator) proposals = propose(*generator, dom, s, derive_seed(seed, s.hash()));

  std::array<double, kNumActions> legal_h{};
  std::vector<double> proposal_h(proposals.size(), 0.0);
  if (need_h) {
    for (int k = 0; k < moves.count; ++k) legal_h[k] = domain_h(dom, moves.successors[k]);
    for (std::size_t i = 0; i < proposals.size(); ++i) proposal_h[i] = domain_h(dom, proposals[i].target);
  }
  ExpansionContext ctx{instance_fp, s, h_state,
                       std::span<const Action>(moves.actions.data(), static_cast<std::size_t>(moves.count)),
                       std::span<const double>(legal_h.data(), static_cast<std::size_t>(moves.count)),
                       proposal_h};
  const EdgeLogProbs lp = mixed_log_probs(policy, ctx);

  std::vector<Child> out;
  out.reserve(static_cast<std::size_t>(moves.count) + proposals.size());
  auto offer = [&](Child c) {
    for (auto& o : out) {
      if (!(o.state == c.state)) continue;
      // Higher probability wins; ties go to the low-level edge, then to the
      // shorter sequence, then to the earlier edge.
      const bool better = c.log_prob > o.log_prob ||
                          (c.log_prob == o.log_prob &&
                           ((c.kind == EdgeKind::LowLevel && o.kind != EdgeKind::LowLevel) ||
                            (c.kind == o.kind && c.actions.size() < o.actions.size())));
      if (better) o = std::move(c);
      return;
    }
    out.push_back(std::move(c));
  };
  for (int k = 0; k < moves.count; ++k) {
    if (lp.low[k] == kNegInf) continue;
    offer({moves.successors[k], EdgeKind::LowLevel, static_cast<int>(moves.actions[k]), {moves.actions[k]},
           lp.low[k], lp.low_has_epsilon, legal_h[k]});
  }
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    if (lp.high[i] == kNegInf) continue;
    offer({proposals[i].target, EdgeKind::Subgoal, proposals[i].proposal_id, std::move(proposals[i].actions),
           lp.high[i], false, proposal_h[i]});
  }
  return out;
}

std::string_view to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Solved: return "solved";
    case SearchStatus::BudgetExhausted: return "budget-exhausted";
    case SearchStatus::QueueExhausted: return "queue-exhausted";
    case SearchStatus::OutOfMemory: return "out-of-memory";
    case SearchStatus::TimeLimit: return "time-limit";
  }
  return "?";
}

double SearchResult::ll_share_expansions() const {
  return expansions > 1 ? static_cast<double>(low_level_expansions) / static_cast<double>(expansions - 1) : 0.0;
}

double SearchResult::ll_share_solution() const {
  const int edges = solution_low_edges + solution_subgoal_edges;
  return edges > 0 ? static_cast<double>(solution_low_edges) / edges : 0.0;
}

json to_json(const SearchResult& r, bool include_wall_clock) {
  json j{{"solved", r.solved},
         {"status", to_string(r.status)},
         {"solution_node", r.solution_node ? json(*r.solution_node) : json(nullptr)},
         {"plan", actions_to_string(r.low_level_plan)},
         {"dist", r.dist()},
         {"g", r.solution_g},
         {"expansions", r.expansions},
         {"search_loss", r.search_loss()},
         {"generated", r.generated},
         {"low_level_expansions", r.low_level_expansions},
         {"solution_low_edges", r.solution_low_edges},
         {"solution_subgoal_edges", r.solution_subgoal_edges},
         {"ll_share_expansions", r.ll_share_expansions()},
         {"ll_share_solution", r.ll_share_solution()},
         {"peak_memory_bytes", r.peak_memory_bytes}};
  if (!r.fringe_at_solution.empty()) j["fringe_at_solution"] = r.fringe_at_solution;
  if (include_wall_clock) j["wall_clock"] = r.wall_clock;
  return j;
}

namespace {

struct QueueEntry {
  PriorityKey key;
  std::uint32_t node;
  friend bool operator>(const QueueEntry& a, const QueueEntry& b) { return b.key < a.key; }
};

}  // namespace

SearchOutcome search(const Instance& instance, const ChildExpander& expander, EvalKind eval,
                     const SearchBudget& budget, const SearchOptions& options) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  if (!expander.domain) throw Error(ErrorCode::InvalidArgument, "expander has no domain");
  expander.policy.validate();
  const Domain& dom = *expander.domain;
  if (dom.id() != instance.domain) throw Error(ErrorCode::InvalidInstance, "instance and domain disagree");
  const State root_state = dom.initial_state();
  dom.validate(root_state);

  auto tree = std::make_shared<NodeStore>();
  std::vector<bool> closed;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;
  SearchResult r;

  {
    SearchNode root;
    root.state_id = tree->intern(root_state);
    root.h = expander.need_h ? domain_h(dom, root_state) : 0.0;
    root.priority = eval_node(eval, root.fields(), root.h, 0, 0);
    const auto id = tree->add(root, {});
    open.push({tree->node(id).priority, id});
    r.generated = 1;
  }

  auto memory = [&] { return tree->memory_bytes() + open.size() * sizeof(QueueEntry) + closed.size() / 8; };

  for (;;) {
    if (open.empty()) {
      r.status = SearchStatus::QueueExhausted;
      break;
    }
    if (r.expansions >= budget.max_expansions) {
      r.status = SearchStatus::BudgetExhausted;
      break;
    }
    if (std::isfinite(budget.wall_clock_seconds) && (r.expansions & 255) == 0 &&
        std::chrono::duration<double>(clock::now() - t0).count() > budget.wall_clock_seconds) {
      r.status = SearchStatus::TimeLimit;
      break;
    }
    const std::uint32_t id = open.top().node;
    open.pop();
    const std::uint32_t sid = tree->node(id).state_id;
    if (options.dedup) {
      if (sid >= closed.size()) closed.resize(std::max<std::size_t>(sid + 1, closed.size() * 2), false);
      if (closed[sid]) continue;
      closed[sid] = true;
    }
    ++r.expansions;
    if (tree->node(id).edge == EdgeKind::LowLevel) ++r.low_level_expansions;
    const State s = tree->state(sid);
    if (dom.is_goal(s)) {
      r.solved = true;
      r.status = SearchStatus::Solved;
      r.solution_node = id;
      break;
    }
    {
      SearchNode& n = tree->node(id);
      n.expanded = true;
      if (n.parent != kNoParent) tree->node(static_cast<std::uint32_t>(n.parent)).child_expanded = true;
    }
    const SearchNode parent = tree->node(id);
    for (Child& c : expander.expand(s, parent.h)) {
      const std::uint32_t cid = tree->intern(c.state);
      if (options.dedup && cid < closed.size() && closed[cid]) continue;
      SearchNode child;
      child.state_id = cid;
      child.parent = static_cast<std::int32_t>(id);
      child.edge = c.kind;
      child.edge_index = c.edge_index;
      child.g = parent.g + 1;
      child.dist = parent.dist + static_cast<std::uint32_t>(c.actions.size());
      child.ll_edges = parent.ll_edges + (c.kind == EdgeKind::LowLevel ? 1 : 0);
      child.eps_edges = parent.eps_edges + (c.eps_factor ? 1 : 0);
      child.log_pi = parent.log_pi + c.log_prob;
      child.h = c.h;
      const std::uint32_t tier = expander.policy.to_zero ? child.eps_edges : 0;
      const auto fifo = static_cast<std::uint64_t>(tree->size());
      child.priority = eval_node(eval, child.fields(), child.h, tier, fifo);
      const auto nid = tree->add(child, c.actions);
      open.push({child.priority, nid});
      ++r.generated;
    }
    const std::size_t mem = memory();
    r.peak_memory_bytes = std::max(r.peak_memory_bytes, mem);
    if (budget.max_memory_bytes > 0 && mem > budget.max_memory_bytes) {
      r.status = SearchStatus::OutOfMemory;
      break;
    }
  }
  r.peak_memory_bytes = std::max(r.peak_memory_bytes, memory());

  if (r.solved) {
    r.low_level_plan = reconstruct_plan(*r.solution_node, *tree);
    for (std::int32_t cur = static_cast<std::int32_t>(*r.solution_node); cur != kNoParent;) {
      const auto& n = tree->node(static_cast<std::uint32_t>(cur));
      if (n.edge == EdgeKind::LowLevel) ++r.solution_low_edges;
      if (n.edge == EdgeKind::Subgoal) ++r.solution_subgoal_edges;
      cur = n.parent;
    }
    r.solution_g = static_cast<int>(tree->node(*r.solution_node).g);
  }
  if (options.instrument) {
    for (std::uint32_t i = 0; i < tree->size(); ++i) {
      const auto& n = tree->node(i);
      if (n.expanded && !n.child_expanded) r.fringe_at_solution.push_back(i);
    }
  }
  r.wall_clock = std::chrono::duration<double>(clock::now() - t0).count();
  SearchOutcome out{std::move(r), nullptr};
  if (options.instrument) out.tree = std::move(tree);
  return out;
}

}  // namespace subsearch
