#include <algorithm>
#include <cstdlib>
#include <deque>
#include <sstream>

#include "subsearch/domains.hpp"

namespace subsearch {

namespace {

std::uint32_t read_mask(const State& s, std::size_t at) {
  return static_cast<std::uint32_t>(s[at]) | (static_cast<std::uint32_t>(s[at + 1]) << 8) |
         (static_cast<std::uint32_t>(s[at + 2]) << 16) | (static_cast<std::uint32_t>(s[at + 3]) << 24);
}

void write_mask(State& s, std::size_t at, std::uint32_t m) {
  for (int i = 0; i < 4; ++i) s[at + i] = static_cast<std::uint8_t>(m >> (8 * i));
}

constexpr std::size_t kAgentByte = 0, kHeldByte = 1, kGemByte = 2, kLooseByte = 3, kOpenedByte = 4, kBytes = 8;

}  // namespace

BoxWorldDomain::BoxWorldDomain(int width, int height, int agent, std::vector<LooseKey> loose_keys,
                               std::vector<Lock> locks, std::vector<int> chain)
    : width_(width), height_(height), loose_(std::move(loose_keys)), locks_(std::move(locks)),
      chain_(std::move(chain)) {
  if (width < 4 || height < 4 || width * height > 256) {
    throw Error(ErrorCode::InvalidInstance, "Box-World grid must be 4x4..256 cells");
  }
  if (locks_.size() > 32 || loose_.size() > 8) {
    throw Error(ErrorCode::InvalidInstance, "Box-World supports at most 32 locks and 8 loose keys");
  }
  const int cells = width * height;
  lock_at_.assign(static_cast<std::size_t>(cells), -1);
  loose_at_.assign(static_cast<std::size_t>(cells), -1);
  auto check_cell = [&](int cell) {
    if (cell < 0 || cell >= cells || !interior(cell / width, cell % width)) {
      throw Error(ErrorCode::InvalidInstance, "Box-World object outside the room");
    }
    if (lock_at_[cell] >= 0 || loose_at_[cell] >= 0) {
      throw Error(ErrorCode::InvalidInstance, "two Box-World objects share a cell");
    }
  };
  bool has_gem = false;
  for (std::size_t i = 0; i < locks_.size(); ++i) {
    check_cell(locks_[i].cell);
    if (locks_[i].color < 0 || locks_[i].color >= 0xFF) throw Error(ErrorCode::InvalidInstance, "bad lock color");
    if (locks_[i].content == kGem) has_gem = true;
    else if (locks_[i].content < 0 || locks_[i].content >= 0xFF) throw Error(ErrorCode::InvalidInstance, "bad lock content");
    lock_at_[locks_[i].cell] = static_cast<int>(i);
  }
  for (std::size_t i = 0; i < loose_.size(); ++i) {
    check_cell(loose_[i].cell);
    if (loose_[i].color < 0 || loose_[i].color >= 0xFF) throw Error(ErrorCode::InvalidInstance, "bad key color");
    loose_at_[loose_[i].cell] = static_cast<int>(i);
  }
  if (!has_gem) throw Error(ErrorCode::InvalidInstance, "Box-World has no gem");
  for (int i : chain_) {
    if (i < 0 || i >= static_cast<int>(locks_.size())) throw Error(ErrorCode::InvalidInstance, "bad chain index");
  }
  if (chain_.empty() || locks_[chain_.back()].content != kGem) {
    throw Error(ErrorCode::InvalidInstance, "Box-World chain must end at the gem lock");
  }
  if (agent < 0 || agent >= cells || !interior(agent / width, agent % width) || lock_at_[agent] >= 0 ||
      loose_at_[agent] >= 0) {
    throw Error(ErrorCode::InvalidInstance, "Box-World agent must start on an empty floor cell");
  }
  std::array<std::uint8_t, kBytes> bytes{};
  bytes[kAgentByte] = static_cast<std::uint8_t>(agent);
  bytes[kHeldByte] = kNoKey;
  initial_ = State(bytes);
}

std::optional<int> BoxWorldDomain::held_key(const State& s) const {
  if (s[kHeldByte] == kNoKey) return std::nullopt;
  return s[kHeldByte];
}

bool BoxWorldDomain::lock_open(const State& s, int lock) const {
  return (read_mask(s, kOpenedByte) >> lock) & 1U;
}

std::optional<State> BoxWorldDomain::apply(const State& s, Action a) const {
  const int r = s[kAgentByte] / width_ + row_delta(a);
  const int c = s[kAgentByte] % width_ + col_delta(a);
  if (!interior(r, c)) return std::nullopt;
  const int cell = r * width_ + c;
  State out = s;
  out[kAgentByte] = static_cast<std::uint8_t>(cell);
  if (const int li = lock_at_[cell]; li >= 0 && !lock_open(s, li)) {
    const Lock& lock = locks_[li];
    if (s[kHeldByte] != lock.color) return std::nullopt;
    write_mask(out, kOpenedByte, read_mask(s, kOpenedByte) | (1U << li));
    if (lock.content == kGem) {
      out[kHeldByte] = kNoKey;
      out[kGemByte] = 1;
    } else {
      out[kHeldByte] = static_cast<std::uint8_t>(lock.content);
    }
    return out;
  }
  if (const int ki = loose_at_[cell]; ki >= 0 && !((s[kLooseByte] >> ki) & 1U)) {
    out[kLooseByte] = static_cast<std::uint8_t>(s[kLooseByte] | (1U << ki));
    out[kHeldByte] = static_cast<std::uint8_t>(loose_[ki].color);
  }
  return out;
}

double BoxWorldDomain::heuristic(const State& s) const {
  if (gem_collected(s)) return 0.0;
  const int gem_cell = locks_[chain_.back()].cell;
  const int agent = s[kAgentByte];
  int remaining = 0;
  for (std::size_t i = 0; i + 1 < chain_.size(); ++i) {
    if (!lock_open(s, chain_[i])) ++remaining;
  }
  return std::abs(agent / width_ - gem_cell / width_) + std::abs(agent % width_ - gem_cell % width_) +
         2.0 * remaining;
}

double BoxWorldDomain::admissible_heuristic(const State& s) const {
  if (gem_collected(s)) return 0.0;
  const int gem_cell = locks_[chain_.back()].cell;
  const int agent = s[kAgentByte];
  return std::abs(agent / width_ - gem_cell / width_) + std::abs(agent % width_ - gem_cell % width_);
}

void BoxWorldDomain::validate(const State& s) const {
  if (s.size() != kBytes) throw Error(ErrorCode::InvalidInstance, "Box-World state has wrong size");
  const int agent = s[kAgentByte];
  if (agent >= width_ * height_ || !interior(agent / width_, agent % width_)) {
    throw Error(ErrorCode::InvalidInstance, "Box-World agent outside the room");
  }
  if (s[kGemByte] > 1) throw Error(ErrorCode::InvalidInstance, "Box-World gem flag corrupt");
}

std::vector<int> BoxWorldDomain::distractor_chain_lengths() const {
  // A branch starts at a lock whose color is a key the solution chain hands out
  // but which is not on the chain; follow its contents while they open locks.
  std::vector<bool> on_chain(locks_.size(), false);
  for (int i : chain_) on_chain[i] = true;
  std::vector<int> lengths;
  std::vector<int> chain_colors;
  for (const auto& k : loose_) chain_colors.push_back(k.color);
  for (int i : chain_) if (locks_[i].content != kGem) chain_colors.push_back(locks_[i].content);
  for (std::size_t i = 0; i < locks_.size(); ++i) {
    if (on_chain[i]) continue;
    if (std::find(chain_colors.begin(), chain_colors.end(), locks_[i].color) == chain_colors.end()) continue;
    int len = 1;
    int color = locks_[i].content;
    for (bool advanced = true; advanced;) {
      advanced = false;
      for (std::size_t j = 0; j < locks_.size(); ++j) {
        if (!on_chain[j] && locks_[j].color == color && color != kGem) {
          ++len;
          color = locks_[j].content;
          advanced = true;
          break;
        }
      }
    }
    lengths.push_back(len);
  }
  return lengths;
}

std::string BoxWorldDomain::describe(const State& s) const {
  std::ostringstream os;
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      const int cell = r * width_ + c;
      char ch = interior(r, c) ? '.' : '#';
      if (lock_at_[cell] >= 0 && !lock_open(s, lock_at_[cell])) {
        ch = locks_[lock_at_[cell]].content == kGem ? '$' : 'L';
      }
      if (loose_at_[cell] >= 0 && !((s[kLooseByte] >> loose_at_[cell]) & 1U)) ch = 'k';
      if (cell == s[kAgentByte]) ch = '@';
      os << ch;
    }
    os << '\n';
  }
  if (auto k = held_key(s)) os << "held " << *k << '\n';
  return os.str();
}

std::shared_ptr<const BoxWorldDomain> BoxWorldDomain::from_instance(const Instance& instance) {
  const auto& j = instance.initial;
  const int width = j.at("width").get<int>();
  const int height = j.at("height").get<int>();
  const int agent = detail::cell_from_json(j.at("agent"), width, height);
  std::vector<LooseKey> keys;
  for (const auto& k : j.at("loose_keys")) {
    keys.push_back({detail::cell_from_json(k.at("cell"), width, height), k.at("color").get<int>()});
  }
  std::vector<Lock> locks;
  for (const auto& l : j.at("locks")) {
    const auto& content = l.at("content");
    const int c = content.is_string() ? (content.get<std::string>() == "gem" ? kGem : -2) : content.get<int>();
    if (c == -2) throw Error(ErrorCode::InvalidInstance, "lock content must be a color or \"gem\"");
    locks.push_back({detail::cell_from_json(l.at("cell"), width, height), l.at("color").get<int>(), c});
  }
  auto chain = j.at("chain").get<std::vector<int>>();
  return std::make_shared<BoxWorldDomain>(width, height, agent, std::move(keys), std::move(locks),
                                          std::move(chain));
}

Instance BoxWorldDomain::generate(const json& params, std::uint64_t seed) {
  const int width = detail::param_int(params, "width", 12, 6, 16);
  const int height = detail::param_int(params, "height", 12, 6, 16);
  const int chain_len = detail::param_int(params, "chain_length", 3, 1, 8);
  const bool ood = detail::param_bool(params, "ood", false);
  int distractors = detail::param_int(params, "distractors", ood ? 4 : 3, 0, 8);
  const int dlen = detail::param_int(params, "distractor_length", 1, 1, 4);
  if (width * height > 256) throw Error(ErrorCode::ParamsOutOfRange, "Box-World grid larger than 256 cells");
  if (ood) distractors = std::max(distractors, 4);

  // Dead-end branch lengths. The out-of-distribution variant alternates
  // branches of length 2 and 3.
  std::vector<int> branch_len;
  for (int i = 0; i < distractors; ++i) branch_len.push_back(ood ? std::max(dlen, 2 + i % 2) : dlen);
  int n_locks = chain_len;
  for (int l : branch_len) n_locks += l;
  const int interior_cells = (width - 2) * (height - 2);
  if (n_locks > 32 || n_locks + 2 > interior_cells / 2) {
    throw Error(ErrorCode::ParamsOutOfRange, "too many Box-World locks for the room");
  }

  Rng rng(derive_seed(seed, 0xb0c5));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<int> palette(32);
    for (int i = 0; i < 32; ++i) palette[i] = i;
    rng.shuffle(palette);
    std::size_t next_color = 0;
    auto fresh = [&] { return palette[next_color++]; };

    std::vector<int> chain_keys;  // key colors handed out along the solution
    for (int i = 0; i < chain_len; ++i) chain_keys.push_back(fresh());

    std::vector<int> cells;
    for (int r = 1; r < height - 1; ++r) for (int c = 1; c < width - 1; ++c) cells.push_back(r * width + c);
    rng.shuffle(cells);
    std::size_t next_cell = 0;

    std::vector<LooseKey> loose{{cells[next_cell++], chain_keys[0]}};
    std::vector<Lock> locks;
    std::vector<int> chain;
    for (int i = 0; i < chain_len; ++i) {
      const int content = i + 1 < chain_len ? chain_keys[i + 1] : kGem;
      chain.push_back(static_cast<int>(locks.size()));
      locks.push_back({cells[next_cell++], chain_keys[i], content});
    }
    for (int len : branch_len) {
      int color = chain_keys[rng.below(chain_keys.size())];
      for (int k = 0; k < len; ++k) {
        const int content = fresh();
        locks.push_back({cells[next_cell++], color, content});
        color = content;
      }
    }
    const int agent = cells[next_cell++];

    // Order locks by cell so the layout, not the construction order, defines
    // lock indices.
    std::vector<int> order(locks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return locks[a].cell < locks[b].cell; });
    std::vector<int> remap(locks.size());
    std::vector<Lock> sorted;
    for (std::size_t i = 0; i < order.size(); ++i) {
      remap[order[i]] = static_cast<int>(i);
      sorted.push_back(locks[order[i]]);
    }
    for (int& i : chain) i = remap[i];

    BoxWorldDomain dom(width, height, agent, loose, sorted, chain);

    // Witness: walk to the loose key, then through the chain. Paths avoid
    // every unopened lock and untaken key except the current target.
    std::vector<Action> witness;
    State s = dom.initial_state();
    std::vector<int> waypoints{loose[0].cell};
    for (int i : chain) waypoints.push_back(sorted[i].cell);
    bool ok = true;
    for (int goal_cell : waypoints) {
      const int cells_n = width * height;
      std::vector<int> prev(static_cast<std::size_t>(cells_n), -2);
      std::vector<Action> via(static_cast<std::size_t>(cells_n));
      std::deque<int> q{s[kAgentByte]};
      prev[s[kAgentByte]] = -1;
      while (!q.empty() && prev[goal_cell] == -2) {
        const int cur = q.front();
        q.pop_front();
        for (Action a : kAllActions) {
          const int r = cur / width + row_delta(a), c = cur % width + col_delta(a);
          if (!dom.interior(r, c)) continue;
          const int nb = r * width + c;
          if (prev[nb] != -2) continue;
          if (nb != goal_cell) {
            if (dom.lock_at_[nb] >= 0 && !dom.lock_open(s, dom.lock_at_[nb])) continue;
            if (dom.loose_at_[nb] >= 0 && !((s[kLooseByte] >> dom.loose_at_[nb]) & 1U)) continue;
          }
          prev[nb] = cur;
          via[nb] = a;
          q.push_back(nb);
        }
      }
      if (prev[goal_cell] == -2) { ok = false; break; }
      std::vector<Action> leg;
      for (int cur = goal_cell; prev[cur] != -1; cur = prev[cur]) leg.push_back(via[cur]);
      std::reverse(leg.begin(), leg.end());
      auto after = replay(dom, s, leg);
      if (!after) { ok = false; break; }
      s = *after;
      witness.insert(witness.end(), leg.begin(), leg.end());
    }
    if (!ok || !dom.is_goal(s)) continue;

    Instance out;
    out.domain = DomainId::BoxWorld;
    out.seed = seed;
    out.params = json{{"width", width}, {"height", height}, {"chain_length", chain_len},
                      {"distractors", distractors}, {"distractor_length", dlen}, {"ood", ood}};
    json jl = json::array();
    for (const auto& l : sorted) {
      json content = l.content == kGem ? json("gem") : json(l.content);
      jl.push_back({{"cell", detail::cell_json(l.cell, width)}, {"color", l.color}, {"content", content}});
    }
    json jk = json::array();
    for (const auto& k : loose) jk.push_back({{"cell", detail::cell_json(k.cell, width)}, {"color", k.color}});
    out.initial = json{{"width", width}, {"height", height}, {"agent", detail::cell_json(agent, width)},
                       {"loose_keys", jk}, {"locks", jl}, {"chain", chain}};
    out.witness = std::move(witness);
    return out;
  }
  throw Error(ErrorCode::ParamsOutOfRange, "could not generate a Box-World layout with these params");
}

}  // namespace subsearch
