#include <algorithm>
#include <bit>
#include <cstdlib>
#include <sstream>

#include "subsearch/domains.hpp"

namespace subsearch {

TspDomain::TspDomain(int width, int height, std::vector<int> cities, int start, int agent,
                     std::uint32_t visited)
    : width_(width), height_(height), cities_(std::move(cities)), start_(start) {
  if (width < 2 || height < 2 || width * height > 256) {
    throw Error(ErrorCode::InvalidInstance, "TSP grid must be 2x2..256 cells");
  }
  if (cities_.size() < 2 || cities_.size() > 32) {
    throw Error(ErrorCode::InvalidInstance, "TSP needs 2..32 cities");
  }
  city_at_.assign(static_cast<std::size_t>(width * height), -1);
  for (std::size_t i = 0; i < cities_.size(); ++i) {
    const int c = cities_[i];
    if (c < 0 || c >= width * height) throw Error(ErrorCode::InvalidInstance, "TSP city outside the grid");
    if (city_at_[c] >= 0) throw Error(ErrorCode::InvalidInstance, "two TSP cities share a cell");
    city_at_[c] = static_cast<int>(i);
  }
  if (start < 0 || start >= static_cast<int>(cities_.size())) {
    throw Error(ErrorCode::InvalidInstance, "TSP start city out of range");
  }
  all_mask_ = cities_.size() == 32 ? 0xFFFFFFFFu : ((1u << cities_.size()) - 1);
  if (agent < 0 || agent >= width * height) throw Error(ErrorCode::InvalidInstance, "TSP agent outside the grid");
  if (visited & ~all_mask_) throw Error(ErrorCode::InvalidInstance, "TSP visited mask has unknown cities");
  if (city_at_[agent] >= 0) visited |= 1u << city_at_[agent];
  initial_ = make_state(agent, visited);
}

std::uint32_t TspDomain::visited(const State& s) const {
  return static_cast<std::uint32_t>(s[1]) | (static_cast<std::uint32_t>(s[2]) << 8) |
         (static_cast<std::uint32_t>(s[3]) << 16) | (static_cast<std::uint32_t>(s[4]) << 24);
}

State TspDomain::make_state(int agent, std::uint32_t visited) const {
  std::array<std::uint8_t, 5> b{static_cast<std::uint8_t>(agent), static_cast<std::uint8_t>(visited),
                                static_cast<std::uint8_t>(visited >> 8), static_cast<std::uint8_t>(visited >> 16),
                                static_cast<std::uint8_t>(visited >> 24)};
  return State(b);
}

int TspDomain::manhattan(int a, int b) const {
  return std::abs(a / width_ - b / width_) + std::abs(a % width_ - b % width_);
}

std::optional<State> TspDomain::apply(const State& s, Action a) const {
  const int r = s[0] / width_ + row_delta(a);
  const int c = s[0] % width_ + col_delta(a);
  if (r < 0 || c < 0 || r >= height_ || c >= width_) return std::nullopt;
  const int cell = r * width_ + c;
  std::uint32_t v = visited(s);
  if (city_at_[cell] >= 0) v |= 1u << city_at_[cell];
  return make_state(cell, v);
}

bool TspDomain::is_goal(const State& s) const {
  return visited(s) == all_mask_ && s[0] == cities_[start_];
}

double TspDomain::heuristic(const State& s) const {
  std::uint32_t left = all_mask_ & ~visited(s);
  int at = s[0];
  int total = 0;
  while (left) {
    int best = -1, best_d = 0;
    for (std::uint32_t m = left; m; m &= m - 1) {
      const int i = std::countr_zero(m);
      const int d = manhattan(at, cities_[i]);
      if (best < 0 || d < best_d) best = i, best_d = d;
    }
    total += best_d;
    at = cities_[best];
    left &= ~(1u << best);
  }
  return total + manhattan(at, cities_[start_]);
}

double TspDomain::admissible_heuristic(const State& s) const {
  const std::uint32_t left = all_mask_ & ~visited(s);
  const int home = cities_[start_];
  if (!left) return manhattan(s[0], home);
  int best = 0;
  for (std::uint32_t m = left; m; m &= m - 1) {
    const int c = cities_[std::countr_zero(m)];
    best = std::max(best, manhattan(s[0], c) + manhattan(c, home));
  }
  return best;
}

void TspDomain::validate(const State& s) const {
  if (s.size() != 5) throw Error(ErrorCode::InvalidInstance, "TSP state has wrong size");
  if (s[0] >= width_ * height_) throw Error(ErrorCode::InvalidInstance, "TSP agent outside the grid");
  if (visited(s) & ~all_mask_) throw Error(ErrorCode::InvalidInstance, "TSP visited mask corrupt");
}

std::string TspDomain::describe(const State& s) const {
  std::ostringstream os;
  const std::uint32_t v = visited(s);
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      const int cell = r * width_ + c;
      char ch = '.';
      if (city_at_[cell] >= 0) ch = (v >> city_at_[cell]) & 1u ? 'o' : 'C';
      if (cell == s[0]) ch = '@';
      os << ch;
    }
    os << '\n';
  }
  return os.str();
}

std::shared_ptr<const TspDomain> TspDomain::from_instance(const Instance& instance) {
  const auto& j = instance.initial;
  const int width = j.at("width").get<int>();
  const int height = j.at("height").get<int>();
  std::vector<int> cities;
  for (const auto& c : j.at("cities")) cities.push_back(detail::cell_from_json(c, width, height));
  const int start = j.value("start", 0);
  const int agent = j.contains("agent") ? detail::cell_from_json(j.at("agent"), width, height)
                                        : (cities.empty() ? 0 : cities.at(start));
  std::uint32_t visited = 0;
  for (const auto& v : j.value("visited", json::array())) {
    const int i = v.get<int>();
    if (i < 0 || i >= static_cast<int>(cities.size())) throw Error(ErrorCode::InvalidInstance, "bad visited city");
    visited |= 1u << i;
  }
  return std::make_shared<TspDomain>(width, height, std::move(cities), start, agent, visited);
}

Instance TspDomain::generate(const json& params, std::uint64_t seed) {
  const int width = detail::param_int(params, "width", 8, 2, 16);
  const int height = detail::param_int(params, "height", 8, 2, 16);
  const int n = detail::param_int(params, "cities", 10, 2, 32);
  if (n > width * height) throw Error(ErrorCode::ParamsOutOfRange, "more cities than cells");
  Rng rng(derive_seed(seed, 0x7500));
  std::vector<int> cells(static_cast<std::size_t>(width * height));
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = static_cast<int>(i);
  rng.shuffle(cells);
  std::vector<int> cities(cells.begin(), cells.begin() + n);

  TspDomain dom(width, height, cities, 0, cities[0], 0);

  // Witness: nearest-neighbour tour, then home. Legs go rows first, then columns.
  std::vector<Action> witness;
  State s = dom.initial_state();
  auto walk_to = [&](int target) {
    while (s[0] != target) {
      const int r = s[0] / width, c = s[0] % width;
      Action a = r < target / width ? Action::South : r > target / width ? Action::North
                 : c < target % width ? Action::East : Action::West;
      s = *dom.apply(s, a);
      witness.push_back(a);
    }
  };
  while (dom.visited(s) != dom.all_mask_) {
    int best = -1, best_d = 0;
    for (std::uint32_t m = dom.all_mask_ & ~dom.visited(s); m; m &= m - 1) {
      const int i = std::countr_zero(m);
      const int d = dom.manhattan(s[0], cities[i]);
      if (best < 0 || d < best_d) best = i, best_d = d;
    }
    walk_to(cities[best]);
  }
  walk_to(cities[0]);

  Instance out;
  out.domain = DomainId::Tsp;
  out.seed = seed;
  out.params = json{{"width", width}, {"height", height}, {"cities", n}};
  json jc = json::array();
  for (int c : cities) jc.push_back(detail::cell_json(c, width));
  out.initial = json{{"width", width}, {"height", height}, {"cities", jc}, {"start", 0},
                     {"agent", detail::cell_json(cities[0], width)}, {"visited", json::array({0})}};
  out.witness = std::move(witness);
  return out;
}

}  // namespace subsearch
