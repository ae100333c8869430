#include "subsearch/oracle.hpp"

#include <algorithm>
#include <deque>
#include <list>
#include <mutex>
#include <unordered_set>

namespace subsearch::oracle {

json to_json(const OracleResult& r) {
  json plan = json::array();
  for (Action a : r.plan) plan.push_back(std::string(1, action_char(a)));
  return json{{"optimal_length", r.optimal_length}, {"plan", plan}, {"visited_count", r.visited_count}};
}

std::optional<OracleResult> bfs_solve(const Domain& domain, const State& start, std::uint64_t cap) {
  struct Entry {
    std::uint32_t parent;
    Action action;
  };
  std::vector<State> states{start};
  std::vector<Entry> entries{{0, Action::North}};
  std::unordered_map<State, std::uint32_t, StateHash> seen{{start, 0}};
  for (std::size_t head = 0; head < states.size(); ++head) {
    const State s = states[head];
    if (domain.is_goal(s)) {
      OracleResult r;
      for (auto i = static_cast<std::uint32_t>(head); i != 0; i = entries[i].parent) r.plan.push_back(entries[i].action);
      std::reverse(r.plan.begin(), r.plan.end());
      r.optimal_length = static_cast<int>(r.plan.size());
      r.visited_count = head + 1;
      return r;
    }
    for (Action a : kAllActions) {
      auto next = domain.apply(s, a);
      if (!next || seen.count(*next)) continue;
      if (states.size() >= cap) throw Error(ErrorCode::OracleBudgetExceeded, "BFS node cap exceeded");
      seen.emplace(*next, static_cast<std::uint32_t>(states.size()));
      states.push_back(*next);
      entries.push_back({static_cast<std::uint32_t>(head), a});
    }
  }
  return std::nullopt;
}

namespace {

class Ida {
 public:
  Ida(const Domain& d, bool domain_h, std::uint64_t cap) : d_(d), domain_h_(domain_h), cap_(cap) {}

  std::optional<OracleResult> run(const State& start) {
    double bound = h(start);
    for (;;) {
      path_.clear();
      on_path_.clear();
      on_path_.insert(start);
      const double next = dfs(start, 0, bound);
      if (found_) {
        OracleResult r;
        r.plan = path_;
        r.optimal_length = static_cast<int>(path_.size());
        r.visited_count = generated_;
        return r;
      }
      if (next == kPosInf) return std::nullopt;
      bound = next;
    }
  }

 private:
  double h(const State& s) const { return domain_h_ ? d_.heuristic(s) : d_.admissible_heuristic(s); }

  double dfs(const State& s, int g, double bound) {
    const double f = g + h(s);
    if (f > bound) return f;
    if (d_.is_goal(s)) {
      found_ = true;
      return f;
    }
    double least = kPosInf;
    for (Action a : kAllActions) {
      auto next = d_.apply(s, a);
      if (!next || on_path_.count(*next)) continue;
      if (++generated_ > cap_) throw Error(ErrorCode::OracleBudgetExceeded, "IDA* generated-node cap exceeded");
      path_.push_back(a);
      on_path_.insert(*next);
      const double t = dfs(*next, g + 1, bound);
      if (found_) return t;
      on_path_.erase(*next);
      path_.pop_back();
      least = std::min(least, t);
    }
    return least;
  }

  const Domain& d_;
  bool domain_h_;
  std::uint64_t cap_;
  std::uint64_t generated_ = 0;
  bool found_ = false;
  std::vector<Action> path_;
  std::unordered_set<State, StateHash> on_path_;
};

}  // namespace

std::optional<OracleResult> idastar_solve(const Domain& domain, const State& start, IdaHeuristic heuristic,
                                          bool allow_inadmissible, std::uint64_t cap) {
  const bool use_domain = heuristic == IdaHeuristic::Domain;
  if (use_domain && !domain.heuristic_is_admissible() && !allow_inadmissible) {
    throw Error(ErrorCode::InadmissibleHeuristic,
                "the " + std::string(to_string(domain.id())) +
                    " heuristic is not admissible; pass allow-inadmissible to use it anyway");
  }
  return Ida(domain, use_domain, cap).run(start);
}

DistanceMap::DistanceMap(const Domain& domain, const State& start, std::uint64_t cap) {
  std::vector<State> states{start};
  std::vector<std::array<std::uint32_t, kNumActions>> succ;
  index_.emplace(start, 0);
  constexpr std::uint32_t kNone = 0xFFFFFFFFu;
  for (std::size_t head = 0; head < states.size(); ++head) {
    std::array<std::uint32_t, kNumActions> row;
    row.fill(kNone);
    const State s = states[head];
    for (Action a : kAllActions) {
      auto next = domain.apply(s, a);
      if (!next) continue;
      auto [it, inserted] = index_.emplace(*next, static_cast<std::uint32_t>(states.size()));
      if (inserted) {
        if (states.size() >= cap) throw Error(ErrorCode::OracleBudgetExceeded, "distance map node cap exceeded");
        states.push_back(*next);
      }
      row[static_cast<int>(a)] = it->second;
    }
    succ.push_back(row);
  }
  const std::size_t n = states.size();
  std::vector<std::uint32_t> offset(n + 1, 0);
  for (const auto& row : succ) for (auto t : row) if (t != kNone) ++offset[t + 1];
  for (std::size_t i = 0; i < n; ++i) offset[i + 1] += offset[i];
  std::vector<std::uint32_t> preds(offset[n]);
  std::vector<std::uint32_t> fill(offset.begin(), offset.end() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto t : succ[i]) if (t != kNone) preds[fill[t]++] = static_cast<std::uint32_t>(i);
  }
  dist_.assign(n, -1);
  std::deque<std::uint32_t> q;
  for (std::size_t i = 0; i < n; ++i) {
    if (domain.is_goal(states[i])) {
      dist_[i] = 0;
      q.push_back(static_cast<std::uint32_t>(i));
    }
  }
  while (!q.empty()) {
    const auto v = q.front();
    q.pop_front();
    for (auto k = offset[v]; k < offset[v + 1]; ++k) {
      const auto u = preds[k];
      if (dist_[u] < 0) {
        dist_[u] = dist_[v] + 1;
        q.push_back(u);
      }
    }
  }
}

std::optional<int> DistanceMap::distance(const State& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return dist_[it->second];
}

std::shared_ptr<const DistanceMap> cached_distance_map(const Instance& instance, const Domain& domain) {
  static std::mutex mu;
  static std::list<std::pair<std::string, std::shared_ptr<const DistanceMap>>> cache;
  constexpr std::size_t kCapacity = 8;
  std::string key = std::string(to_string(instance.domain)) + ":";
  if (instance.domain == DomainId::Stp) {
    key += std::to_string(instance.initial.at("width").get<int>());
  } else {
    key += std::to_string(instance.fingerprint());
  }
  {
    std::lock_guard lock(mu);
    for (auto it = cache.begin(); it != cache.end(); ++it) {
      if (it->first == key) {
        cache.splice(cache.begin(), cache, it);
        return it->second;
      }
    }
  }
  auto map = std::make_shared<const DistanceMap>(domain, domain.initial_state());
  std::lock_guard lock(mu);
  cache.emplace_front(key, map);
  if (cache.size() > kCapacity) cache.pop_back();
  return map;
}

std::vector<Action> optimal_first_actions(const Domain& domain, const State& s, std::uint64_t cap) {
  auto here = bfs_solve(domain, s, cap);
  if (!here || here->optimal_length == 0) return {};
  std::vector<Action> out;
  for (Action a : kAllActions) {
    auto next = domain.apply(s, a);
    if (!next) continue;
    auto there = bfs_solve(domain, *next, cap);
    if (there && there->optimal_length + 1 == here->optimal_length) out.push_back(a);
  }
  return out;
}

}  // namespace subsearch::oracle
