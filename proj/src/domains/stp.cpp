#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "subsearch/domains.hpp"

namespace subsearch {

namespace {

// Each slide is a transposition and moves the blank by one cell, so a
// configuration is reachable from the goal iff the permutation parity equals
// the parity of the blank's distance from the top-left corner.
bool solvable(int width, std::span<const std::uint8_t> tiles) {
  const int n = width * width;
  int inversions = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (tiles[i] > tiles[j]) ++inversions;
    }
  }
  const int blank = static_cast<int>(std::find(tiles.begin(), tiles.end(), 0) - tiles.begin());
  return (inversions % 2) == ((blank / width + blank % width) % 2);
}

}  // namespace

StpDomain::StpDomain(int width, std::vector<std::uint8_t> tiles) : width_(width) {
  if (width < 2 || width > 5) throw Error(ErrorCode::InvalidInstance, "STP width must be 2..5");
  if (tiles.size() != static_cast<std::size_t>(width * width)) {
    throw Error(ErrorCode::InvalidInstance, "STP tile count does not match width");
  }
  std::vector<std::uint8_t> sorted = tiles;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != i) throw Error(ErrorCode::InvalidInstance, "STP tiles are not a permutation");
  }
  if (!solvable(width, tiles)) {
    throw Error(ErrorCode::InvalidInstance, "STP configuration has unsolvable parity");
  }
  initial_ = encode(width, tiles);
  goal_ = goal_state(width);
}

State StpDomain::encode(int width, std::span<const std::uint8_t> tiles) {
  std::vector<std::uint8_t> bytes(tiles.begin(), tiles.end());
  const auto blank = std::find(tiles.begin(), tiles.end(), 0) - tiles.begin();
  bytes.push_back(static_cast<std::uint8_t>(blank));
  (void)width;
  return State(bytes);
}

State StpDomain::goal_state(int width) {
  std::vector<std::uint8_t> tiles(static_cast<std::size_t>(width * width));
  std::iota(tiles.begin(), tiles.end(), 0);
  return encode(width, tiles);
}

std::vector<std::uint8_t> StpDomain::tiles(const State& s) const {
  auto b = s.bytes();
  return {b.begin(), b.begin() + width_ * width_};
}

std::shared_ptr<const StpDomain> StpDomain::from_instance(const Instance& instance) {
  const auto& init = instance.initial;
  const int width = init.at("width").get<int>();
  auto tiles = init.at("tiles").get<std::vector<int>>();
  std::vector<std::uint8_t> t;
  for (int v : tiles) {
    if (v < 0 || v > 255) throw Error(ErrorCode::InvalidInstance, "STP tile out of range");
    t.push_back(static_cast<std::uint8_t>(v));
  }
  return std::make_shared<StpDomain>(width, std::move(t));
}

Instance StpDomain::generate(const json& params, std::uint64_t seed) {
  const int width = detail::param_int(params, "width", 3, 2, 5);
  const int walk = detail::param_int(params, "walk_length", 50, 0, 1000000);
  Rng rng(derive_seed(seed, 0x5770));

  const int n = width * width;
  std::vector<std::uint8_t> tiles(static_cast<std::size_t>(n));
  std::iota(tiles.begin(), tiles.end(), 0);
  int blank = 0;
  std::vector<Action> walked;
  std::optional<Action> last;
  for (int step = 0; step < walk; ++step) {
    std::vector<Action> options;
    for (Action a : kAllActions) {
      if (last && a == inverse(*last)) continue;
      const int r = blank / width + row_delta(a);
      const int c = blank % width + col_delta(a);
      if (r >= 0 && c >= 0 && r < width && c < width) options.push_back(a);
    }
    const Action a = options[rng.below(options.size())];
    const int next = (blank / width + row_delta(a)) * width + blank % width + col_delta(a);
    std::swap(tiles[blank], tiles[next]);
    blank = next;
    walked.push_back(a);
    last = a;
  }

  Instance out;
  out.domain = DomainId::Stp;
  out.seed = seed;
  out.params = json{{"width", width}, {"walk_length", walk}};
  out.initial = json{{"width", width}, {"tiles", tiles}};
  for (auto it = walked.rbegin(); it != walked.rend(); ++it) out.witness.push_back(inverse(*it));
  return out;
}

std::optional<State> StpDomain::apply(const State& s, Action a) const {
  const int blank_idx = width_ * width_;
  const int blank = s[blank_idx];
  const int r = blank / width_ + row_delta(a);
  const int c = blank % width_ + col_delta(a);
  if (r < 0 || c < 0 || r >= width_ || c >= width_) return std::nullopt;
  const int next = r * width_ + c;
  State out = s;
  out[blank] = s[next];
  out[next] = 0;
  out[blank_idx] = static_cast<std::uint8_t>(next);
  return out;
}

bool StpDomain::is_goal(const State& s) const { return s == goal_; }

int StpDomain::manhattan(const State& s) const {
  int sum = 0;
  const int n = width_ * width_;
  for (int i = 0; i < n; ++i) {
    const int t = s[i];
    if (t == 0) continue;
    sum += std::abs(i / width_ - t / width_) + std::abs(i % width_ - t % width_);
  }
  return sum;
}

double StpDomain::heuristic(const State& s) const { return manhattan(s); }
double StpDomain::admissible_heuristic(const State& s) const { return manhattan(s); }

void StpDomain::validate(const State& s) const {
  const int n = width_ * width_;
  if (s.size() != static_cast<std::size_t>(n + 1)) {
    throw Error(ErrorCode::InvalidInstance, "STP state has wrong size");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    if (s[i] >= n || seen[s[i]]) throw Error(ErrorCode::InvalidInstance, "STP state is not a permutation");
    seen[s[i]] = true;
  }
  if (s[s[n]] != 0) throw Error(ErrorCode::InvalidInstance, "STP blank index inconsistent");
}

std::string StpDomain::describe(const State& s) const {
  std::ostringstream os;
  for (int r = 0; r < width_; ++r) {
    for (int c = 0; c < width_; ++c) {
      if (c) os << ' ';
      os << static_cast<int>(s[r * width_ + c]);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace subsearch
