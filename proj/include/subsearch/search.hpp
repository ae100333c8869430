#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "subsearch/domain.hpp"
#include "subsearch/evaluation.hpp"
#include "subsearch/generators.hpp"
#include "subsearch/policy.hpp"

namespace subsearch {

inline constexpr std::int32_t kNoParent = -1;

struct SearchNode {
  std::uint32_t state_id = 0;
  std::int32_t parent = kNoParent;
  EdgeKind edge = EdgeKind::Root;
  std::int32_t edge_index = 0;  // action code, or proposal id within the parent's expansion
  std::uint32_t g = 0;
  std::uint32_t dist = 0;
  std::uint32_t ll_edges = 0;   // low-level edges on the root path
  std::uint32_t eps_edges = 0;  // low-level edges that carried an epsilon factor
  double log_pi = 0.0;
  double h = 0.0;
  PriorityKey priority;
  std::uint32_t actions_begin = 0;
  std::uint32_t actions_len = 0;
  bool expanded = false;
  bool child_expanded = false;

  NodeFields fields() const { return {static_cast<int>(g), static_cast<int>(dist), log_pi}; }
};

// Search tree with interned states and a shared pool of edge action sequences.
class NodeStore {
 public:
  std::uint32_t intern(const State& s);
  const State& state(std::uint32_t id) const { return states_[id]; }
  std::size_t state_count() const { return states_.size(); }

  std::uint32_t add(SearchNode node, std::span<const Action> edge_actions);
  const SearchNode& node(std::uint32_t id) const { return nodes_[id]; }
  SearchNode& node(std::uint32_t id) { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }
  std::span<const Action> edge_actions(const SearchNode& n) const {
    return {actions_.data() + n.actions_begin, n.actions_len};
  }

  std::size_t memory_bytes() const;
  // One JSON object per node.
  std::string dump_jsonl() const;

 private:
  std::vector<SearchNode> nodes_;
  std::vector<State> states_;
  std::unordered_map<State, std::uint32_t, StateHash> index_;
  std::vector<Action> actions_;
};

// Concatenation of edge action sequences from the root to `node`.
std::vector<Action> reconstruct_plan(std::uint32_t node, const NodeStore& tree);

struct Child {
  State state;
  EdgeKind kind = EdgeKind::LowLevel;
  int edge_index = 0;
  std::vector<Action> actions;
  double log_prob = 0.0;
  bool eps_factor = false;
  double h = 0.0;
};

// Produces the children of a state: every legal low-level successor and every
// valid proposal, scored by the mixed policy. Edges with zero probability are
// dropped; children sharing a target keep the more probable edge.
struct ChildExpander {
  std::shared_ptr<const Domain> domain;
  std::shared_ptr<const Generator> generator;  // null proposes nothing
  MixedPolicy policy;
  std::uint64_t seed = 0;
  std::uint64_t instance_fp = 0;
  bool need_h = true;

  std::vector<Child> expand(const State& s, double h_state) const;
};

struct SearchBudget {
  std::uint64_t max_expansions = std::numeric_limits<std::uint64_t>::max();
  double wall_clock_seconds = kPosInf;
  std::size_t max_memory_bytes = 0;  // 0 = unlimited
};

struct SearchOptions {
  bool dedup = true;
  bool instrument = false;  // keep the tree and record the fringe
};

enum class SearchStatus { Solved, BudgetExhausted, QueueExhausted, OutOfMemory, TimeLimit };
std::string_view to_string(SearchStatus s);

struct SearchResult {
  bool solved = false;
  SearchStatus status = SearchStatus::BudgetExhausted;
  std::optional<std::uint32_t> solution_node;
  std::vector<Action> low_level_plan;
  std::uint64_t expansions = 0;  // every non-stale pop, the solution pop included
  std::uint64_t generated = 0;
  std::uint64_t low_level_expansions = 0;
  std::vector<std::uint32_t> fringe_at_solution;
  int solution_g = 0;
  int solution_low_edges = 0;
  int solution_subgoal_edges = 0;
  std::size_t peak_memory_bytes = 0;
  double wall_clock = 0.0;

  // Nodes expanded before the solution node was popped.
  std::uint64_t search_loss() const { return expansions > 0 ? expansions - 1 : 0; }
  int dist() const { return static_cast<int>(low_level_plan.size()); }
  double ll_share_expansions() const;
  double ll_share_solution() const;
};

json to_json(const SearchResult& r, bool include_wall_clock = true);

struct SearchOutcome {
  SearchResult result;
  std::shared_ptr<const NodeStore> tree;  // set when instrumented
};

SearchOutcome search(const Instance& instance, const ChildExpander& expander, EvalKind eval,
                     const SearchBudget& budget, const SearchOptions& options = {});

}  // namespace subsearch
