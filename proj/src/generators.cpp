#include "subsearch/generators.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_set>

namespace subsearch {

GeneratorKind parse_generator_kind(std::string_view name) {
  if (name == "null") return GeneratorKind::Null;
  if (name == "macro") return GeneratorKind::Macro;
  if (name == "greedy-rollout") return GeneratorKind::GreedyRollout;
  if (name == "demo-segment") return GeneratorKind::DemoSegment;
  if (name == "adversarial") return GeneratorKind::Adversarial;
  throw Error(ErrorCode::Config, "unknown generator '" + std::string(name) + "'");
}

std::string_view to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::Null: return "null";
    case GeneratorKind::Macro: return "macro";
    case GeneratorKind::GreedyRollout: return "greedy-rollout";
    case GeneratorKind::DemoSegment: return "demo-segment";
    case GeneratorKind::Adversarial: return "adversarial";
  }
  return "?";
}

void GeneratorConfig::validate() const {
  if (horizon < 1) throw Error(ErrorCode::Config, "generator horizon must be >= 1");
  if (kind != GeneratorKind::Null && max_proposals < 1) {
    throw Error(ErrorCode::Config, "generator max_proposals must be >= 1");
  }
  if (lookahead < 0) throw Error(ErrorCode::Config, "lookahead must be >= 0");
  if (!(coverage >= 0.0 && coverage <= 1.0)) throw Error(ErrorCode::Config, "coverage must lie in [0, 1]");
  for (int l : lengths) {
    if (l < 1 || l > horizon) throw Error(ErrorCode::Config, "rollout lengths must lie in [1, horizon]");
  }
  for (const auto& m : catalog) {
    if (m.empty() || static_cast<int>(m.size()) > horizon) {
      throw Error(ErrorCode::Config, "macro length must lie in [1, horizon]");
    }
  }
}

GeneratorConfig generator_config_from_json(const json& j) {
  GeneratorConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) throw Error(ErrorCode::Config, "generator config must be an object");
  try {
    c.kind = parse_generator_kind(j.value("kind", std::string("null")));
    c.horizon = j.value("horizon", c.horizon);
    c.max_proposals = j.value("max_proposals", c.max_proposals);
    if (j.contains("catalog")) {
      for (const auto& m : j.at("catalog")) {
        const auto text = m.get<std::string>();
        auto seq = actions_from_string(text);
        c.catalog.push_back(std::move(seq));
      }
    }
    if (j.contains("lengths")) c.lengths = j.at("lengths").get<std::vector<int>>();
    c.lookahead = j.value("lookahead", c.lookahead);
    c.coverage = j.value("coverage", c.coverage);
    c.mask_seed = j.value("mask_seed", c.mask_seed);
    const auto mode = j.value("mode", std::string("first-action-wrong"));
    if (mode == "first-action-wrong") c.mode = AdversarialMode::FirstActionWrong;
    else if (mode == "away-from-goal") c.mode = AdversarialMode::AwayFromGoal;
    else throw Error(ErrorCode::Config, "unknown adversarial mode '" + mode + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("generator config: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) throw Error(ErrorCode::Config, e.what());
    throw;
  }
  if (c.kind == GeneratorKind::Macro && c.catalog.empty()) {
    for (Action a : kAllActions) c.catalog.push_back(std::vector<Action>(c.horizon, a));
  }
  c.validate();
  return c;
}

json to_json(const GeneratorConfig& c) {
  json j{{"kind", to_string(c.kind)}, {"horizon", c.horizon}, {"max_proposals", c.max_proposals}};
  if (c.kind == GeneratorKind::Macro) {
    json cat = json::array();
    for (const auto& m : c.catalog) cat.push_back(actions_to_string(m));
    j["catalog"] = cat;
  }
  if (c.kind == GeneratorKind::GreedyRollout) {
    j["lengths"] = c.lengths;
    j["lookahead"] = c.lookahead;
  }
  if (c.kind == GeneratorKind::DemoSegment) {
    j["coverage"] = c.coverage;
    j["mask_seed"] = c.mask_seed;
  }
  if (c.kind == GeneratorKind::Adversarial) {
    j["mode"] = c.mode == AdversarialMode::FirstActionWrong ? "first-action-wrong" : "away-from-goal";
  }
  return j;
}

// ---------------------------------------------------------------------------
// Demonstrations

json to_json(const DemoTrajectory& t) {
  json acts = json::array();
  for (Action a : t.actions) acts.push_back(std::string(1, action_char(a)));
  return json{{"domain", to_string(t.domain)}, {"seed", t.seed}, {"params", t.params},
              {"actions", acts}, {"length", t.actions.size()}};
}

DemoTrajectory demo_from_json(const json& j) {
  DemoTrajectory t;
  try {
    t.domain = parse_domain(j.at("domain").get<std::string>());
    t.seed = j.at("seed").get<std::uint64_t>();
    t.params = j.value("params", json::object());
    for (const auto& a : j.at("actions")) {
      const auto s = a.get<std::string>();
      auto act = s.size() == 1 ? parse_action(s[0]) : std::nullopt;
      if (!act) throw Error(ErrorCode::Io, "bad action in demo trajectory");
      t.actions.push_back(*act);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, std::string("demo trajectory: ") + e.what());
  }
  return t;
}

std::string to_jsonl(const DemoDataset& d) {
  std::string out;
  for (const auto& t : d.trajectories) {
    out += to_json(t).dump();
    out += '\n';
  }
  return out;
}

DemoDataset dataset_from_jsonl(std::string_view text) {
  DemoDataset d;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      d.trajectories.push_back(demo_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Io, std::string("demo dataset: ") + e.what());
    }
  }
  return d;
}

DemoDataset build_demo_dataset(DomainId domain, const json& params, int n_instances, std::uint64_t base_seed,
                               double noise) {
  if (n_instances < 0) throw Error(ErrorCode::InvalidArgument, "instance count must be non-negative");
  if (!(noise >= 0.0 && noise <= 0.5)) throw Error(ErrorCode::InvalidArgument, "noise must lie in [0, 0.5]");
  DemoDataset out;
  for (int i = 0; i < n_instances; ++i) {
    const std::uint64_t seed = derive_seed(base_seed, static_cast<std::uint64_t>(i));
    const Instance inst = generate_instance(domain, params, seed);
    const auto dom = make_domain(inst);
    const auto dist = oracle::cached_distance_map(inst, *dom);
    Rng rng(derive_seed(seed, 0xde30));
    DemoTrajectory t{domain, seed, inst.params, {}};
    State s = dom->initial_state();
    const auto d0 = dist->distance(s);
    if (!d0 || *d0 < 0) throw Error(ErrorCode::OracleBudgetExceeded, "oracle found no solution for demo instance");
    const std::size_t step_cap = static_cast<std::size_t>(*d0) * 100 + 1000;
    while (!dom->is_goal(s)) {
      if (t.actions.size() > step_cap) {
        throw Error(ErrorCode::OracleBudgetExceeded, "demo trajectory did not reach the goal");
      }
      const int here = *dist->distance(s);
      const auto moves = dom->legal_moves(s);
      std::vector<int> solvable, optimal;
      for (int k = 0; k < moves.count; ++k) {
        const auto d = dist->distance(moves.successors[k]);
        if (!d || *d < 0) continue;
        solvable.push_back(k);
        if (*d == here - 1) optimal.push_back(k);
      }
      const int k = noise > 0.0 && rng.bernoulli(noise) ? solvable[rng.below(solvable.size())] : optimal.front();
      t.actions.push_back(moves.actions[k]);
      s = moves.successors[k];
    }
    out.trajectories.push_back(std::move(t));
  }
  return out;
}

SegmentIndex SegmentIndex::build(const DemoDataset& dataset, int horizon) {
  if (horizon < 1) throw Error(ErrorCode::InvalidArgument, "segment horizon must be >= 1");
  SegmentIndex idx;
  for (const auto& t : dataset.trajectories) {
    const Instance inst = generate_instance(t.domain, t.params, t.seed);
    const auto dom = make_domain(inst);
    const std::uint64_t fp = inst.fingerprint();
    std::vector<State> states{dom->initial_state()};
    for (Action a : t.actions) {
      auto next = dom->apply(states.back(), a);
      if (!next) throw Error(ErrorCode::Io, "demo trajectory does not replay on its instance");
      idx.table_->add(fp, states.back(), a);
      states.push_back(*next);
    }
    for (std::size_t i = 0; i < t.actions.size(); i += static_cast<std::size_t>(horizon)) {
      const std::size_t end = std::min(t.actions.size(), i + static_cast<std::size_t>(horizon));
      Segment seg{{t.actions.begin() + i, t.actions.begin() + end}, states[end]};
      auto& list = idx.map_[hash_combine(fp, states[i].hash())];
      const bool dup = std::any_of(list.begin(), list.end(),
                                   [&](const Segment& o) { return o.actions == seg.actions; });
      if (!dup) list.push_back(std::move(seg));
    }
  }
  return idx;
}

const std::vector<SegmentIndex::Segment>* SegmentIndex::find(std::uint64_t instance_fp, const State& s) const {
  auto it = map_.find(hash_combine(instance_fp, s.hash()));
  return it == map_.end() ? nullptr : &it->second;
}

bool segment_key_kept(std::uint64_t key_hash, std::uint64_t mask_seed, double coverage) {
  if (coverage >= 1.0) return true;
  const std::uint64_t u = derive_seed(mask_seed, key_hash);
  return static_cast<double>(u >> 11) * 0x1.0p-53 < coverage;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

class NullGenerator final : public Generator {
 public:
  NullGenerator(GeneratorConfig c, std::shared_ptr<const Domain> d) : Generator(std::move(c), std::move(d)) {}
  std::vector<SubgoalProposal> candidates(const State&, std::uint64_t) const override { return {}; }
};

class MacroGenerator final : public Generator {
 public:
  MacroGenerator(GeneratorConfig c, std::shared_ptr<const Domain> d) : Generator(std::move(c), std::move(d)) {}
  std::vector<SubgoalProposal> candidates(const State&, std::uint64_t) const override {
    std::vector<SubgoalProposal> out;
    for (const auto& m : config_.catalog) out.push_back({0, State{}, m, false});
    return out;
  }
};

class GreedyRolloutGenerator final : public Generator {
 public:
  GreedyRolloutGenerator(GeneratorConfig c, std::shared_ptr<const Domain> d)
      : Generator(std::move(c), std::move(d)) {
    if (config_.lengths.empty()) {
      const int h = config_.horizon;
      for (int l : {h / 4, h / 2, h}) {
        if (l >= 1 && std::find(config_.lengths.begin(), config_.lengths.end(), l) == config_.lengths.end()) {
          config_.lengths.push_back(l);
        }
      }
    }
    std::sort(config_.lengths.begin(), config_.lengths.end());
  }

  // Best-first on h within depth l; proposes the lowest-h state found (deeper on
  // ties), or a goal as soon as one is popped.
  std::vector<SubgoalProposal> lookahead(const State& s, int cap) const {
    struct N { State st; int parent; Action a; int depth; double h; };
    std::vector<SubgoalProposal> out;
    for (int l : config_.lengths) {
      std::vector<N> nodes{{s, -1, Action::North, 0, domain_->heuristic(s)}};
      std::unordered_set<State, StateHash> seen{s};
      using Q = std::pair<double, int>;
      std::priority_queue<Q, std::vector<Q>, std::greater<Q>> open;
      open.push({nodes[0].h, 0});
      int best = 0;
      for (int it = 0; it < cap && !open.empty(); ++it) {
        const int i = open.top().second;
        open.pop();
        if (domain_->is_goal(nodes[i].st)) { best = i; break; }
        if (nodes[i].depth >= l) continue;
        const auto moves = domain_->legal_moves(nodes[i].st);
        for (int k = 0; k < moves.count; ++k) {
          if (!seen.insert(moves.successors[k]).second) continue;
          const double h = domain_->heuristic(moves.successors[k]);
          nodes.push_back({moves.successors[k], i, moves.actions[k], nodes[i].depth + 1, h});
          const int j = static_cast<int>(nodes.size()) - 1;
          if (h < nodes[best].h || (h == nodes[best].h && nodes[j].depth > nodes[best].depth)) best = j;
          open.push({h, j});
        }
      }
      if (best == 0) continue;
      std::vector<Action> acts;
      for (int i = best; nodes[i].parent >= 0; i = nodes[i].parent) acts.push_back(nodes[i].a);
      std::reverse(acts.begin(), acts.end());
      out.push_back({0, State{}, acts, false});
    }
    return out;
  }

  std::vector<SubgoalProposal> candidates(const State& s, std::uint64_t) const override {
    if (config_.lookahead > 0) return lookahead(s, config_.lookahead);
    const int max_len = config_.lengths.back();
    std::vector<Action> roll;
    std::unordered_set<State, StateHash> seen{s};
    State cur = s;
    while (static_cast<int>(roll.size()) < max_len && !domain_->is_goal(cur)) {
      const auto moves = domain_->legal_moves(cur);
      int best = -1;
      double best_h = kPosInf;
      for (int k = 0; k < moves.count; ++k) {
        if (seen.count(moves.successors[k])) continue;
        const double h = domain_->heuristic(moves.successors[k]);
        if (h < best_h) best = k, best_h = h;
      }
      if (best < 0) break;
      roll.push_back(moves.actions[best]);
      cur = moves.successors[best];
      seen.insert(cur);
    }
    std::vector<SubgoalProposal> out;
    const bool reached_goal = domain_->is_goal(cur);
    for (int l : config_.lengths) {
      if (l <= static_cast<int>(roll.size())) {
        out.push_back({0, State{}, {roll.begin(), roll.begin() + l}, false});
      } else {
        if (reached_goal && !roll.empty()) out.push_back({0, cur, roll, false});
        break;
      }
    }
    return out;
  }
};

class DemoSegmentGenerator final : public Generator {
 public:
  DemoSegmentGenerator(GeneratorConfig c, std::shared_ptr<const Domain> d,
                       std::shared_ptr<const SegmentIndex> index, std::uint64_t fp)
      : Generator(std::move(c), std::move(d)), index_(std::move(index)), fp_(fp) {}

  std::vector<SubgoalProposal> candidates(const State& s, std::uint64_t) const override {
    const auto* segs = index_->find(fp_, s);
    if (!segs || !segment_key_kept(hash_combine(fp_, s.hash()), config_.mask_seed, config_.coverage)) return {};
    std::vector<SubgoalProposal> out;
    for (const auto& seg : *segs) out.push_back({0, seg.end, seg.actions, false});
    return out;
  }

 private:
  std::shared_ptr<const SegmentIndex> index_;
  std::uint64_t fp_;
};

// Proposals built to mislead: every sequence starts with a non-optimal action
// (or only moves away from the goal) and never ends on a goal state.
class AdversarialGenerator final : public Generator {
 public:
  AdversarialGenerator(GeneratorConfig c, std::shared_ptr<const Domain> d,
                       std::shared_ptr<const oracle::DistanceMap> dist)
      : Generator(std::move(c), std::move(d)), dist_(std::move(dist)) {}

  std::vector<SubgoalProposal> candidates(const State& s, std::uint64_t seed) const override {
    const int here = d(s);
    if (here == 0) return {};
    Rng rng(seed);
    std::vector<SubgoalProposal> out;
    const auto moves = domain_->legal_moves(s);
    std::vector<int> first;
    for (int k = 0; k < moves.count; ++k) {
      if (domain_->is_goal(moves.successors[k])) continue;
      if (!is_optimal_step(here, d(moves.successors[k]))) {
        if (config_.mode == AdversarialMode::AwayFromGoal && !moves_away(here, d(moves.successors[k]))) continue;
        first.push_back(k);
      }
    }
    if (first.empty()) return {};
    for (int p = 0; p < config_.max_proposals; ++p) {
      const int len = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(config_.horizon)));
      const int k0 = first[rng.below(first.size())];
      std::vector<Action> seq{moves.actions[k0]};
      State cur = moves.successors[k0];
      while (static_cast<int>(seq.size()) < len) {
        const auto next = domain_->legal_moves(cur);
        std::vector<int> ok;
        const int dc = d(cur);
        for (int k = 0; k < next.count; ++k) {
          if (domain_->is_goal(next.successors[k])) continue;
          if (config_.mode == AdversarialMode::AwayFromGoal && !moves_away(dc, d(next.successors[k]))) continue;
          ok.push_back(k);
        }
        if (ok.empty()) break;
        const int k = ok[rng.below(ok.size())];
        seq.push_back(next.actions[k]);
        cur = next.successors[k];
      }
      out.push_back({0, cur, std::move(seq), false});
    }
    return out;
  }

 private:
  // -1 for states from which no goal is reachable.
  int d(const State& s) const {
    const auto v = dist_->distance(s);
    return v ? *v : -1;
  }
  static bool is_optimal_step(int from, int to) { return from > 0 && to >= 0 && to == from - 1; }
  static bool moves_away(int from, int to) {
    if (from < 0) return false;
    return to < 0 || to > from;
  }

  std::shared_ptr<const oracle::DistanceMap> dist_;
};

}  // namespace

std::shared_ptr<const Generator> make_generator(const GeneratorConfig& config, const Instance& instance,
                                                std::shared_ptr<const Domain> domain,
                                                const GeneratorResources& resources) {
  config.validate();
  switch (config.kind) {
    case GeneratorKind::Null:
      return std::make_shared<NullGenerator>(config, std::move(domain));
    case GeneratorKind::Macro:
      return std::make_shared<MacroGenerator>(config, std::move(domain));
    case GeneratorKind::GreedyRollout:
      return std::make_shared<GreedyRolloutGenerator>(config, std::move(domain));
    case GeneratorKind::DemoSegment: {
      if (!resources.segments) throw Error(ErrorCode::Config, "demo-segment generator needs a demo dataset");
      return std::make_shared<DemoSegmentGenerator>(config, std::move(domain), resources.segments,
                                                    instance.fingerprint());
    }
    case GeneratorKind::Adversarial: {
      auto dist = oracle::cached_distance_map(instance, *domain);
      return std::make_shared<AdversarialGenerator>(config, std::move(domain), std::move(dist));
    }
  }
  throw Error(ErrorCode::Config, "unknown generator kind");
}

std::vector<SubgoalProposal> propose(const Generator& gen, const Domain& domain, const State& s,
                                     std::uint64_t seed) {
  auto raw = gen.candidates(s, seed);
  std::vector<SubgoalProposal> out;
  for (auto& c : raw) {
    if (c.actions.empty() || static_cast<int>(c.actions.size()) > gen.horizon()) continue;
    auto end = replay(domain, s, c.actions);
    if (!end || *end == s) continue;
    if (c.target.size() != 0 && !(c.target == *end)) continue;
    c.target = *end;
    c.valid = true;
    auto same = std::find_if(out.begin(), out.end(), [&](const SubgoalProposal& o) { return o.target == c.target; });
    if (same == out.end()) {
      out.push_back(std::move(c));
    } else if (c.actions.size() < same->actions.size()) {
      *same = std::move(c);
    }
  }
  if (static_cast<int>(out.size()) > gen.max_proposals()) out.resize(static_cast<std::size_t>(gen.max_proposals()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i].proposal_id = static_cast<int>(i);
  return out;
}

}  // namespace subsearch
