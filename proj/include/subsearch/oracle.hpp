#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "subsearch/domain.hpp"

namespace subsearch::oracle {

inline constexpr std::uint64_t kDefaultBfsCap = 10'000'000;
inline constexpr std::uint64_t kDefaultIdaCap = 100'000'000;

struct OracleResult {
  int optimal_length = 0;
  std::vector<Action> plan;
  std::uint64_t visited_count = 0;
};

json to_json(const OracleResult& r);

// Breadth-first search from `start`. Throws OracleBudgetExceeded past `cap`
// visited states; nullopt when the reachable space holds no goal.
std::optional<OracleResult> bfs_solve(const Domain& domain, const State& start,
                                      std::uint64_t cap = kDefaultBfsCap);

enum class IdaHeuristic { Domain, Admissible };

// IDA* with either the domain heuristic (refused unless documented admissible
// or `allow_inadmissible`) or the domain's admissible lower bound.
std::optional<OracleResult> idastar_solve(const Domain& domain, const State& start,
                                          IdaHeuristic heuristic = IdaHeuristic::Admissible,
                                          bool allow_inadmissible = false,
                                          std::uint64_t cap = kDefaultIdaCap);

// Exact goal distance for every state reachable from `start` (-1 when no goal
// is reachable from it).
class DistanceMap {
 public:
  DistanceMap(const Domain& domain, const State& start, std::uint64_t cap = kDefaultBfsCap);

  // nullopt for states outside the explored space.
  std::optional<int> distance(const State& s) const;
  std::size_t size() const { return index_.size(); }

 private:
  std::unordered_map<State, std::uint32_t, StateHash> index_;
  std::vector<int> dist_;
};

// Shared distance maps keyed by the instance layout. Sliding-tile maps are
// shared across all instances of one width.
std::shared_ptr<const DistanceMap> cached_distance_map(const Instance& instance, const Domain& domain);

// Actions that begin some optimal plan from `s` (empty at goals).
std::vector<Action> optimal_first_actions(const Domain& domain, const State& s,
                                          std::uint64_t cap = kDefaultBfsCap);

}  // namespace subsearch::oracle
