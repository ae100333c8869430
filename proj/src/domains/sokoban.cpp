#include <algorithm>
#include <cstdlib>
#include <deque>
#include <sstream>
#include <tuple>

#include "subsearch/domains.hpp"

namespace subsearch {

namespace {

int manhattan(int a, int b, int width) {
  return std::abs(a / width - b / width) + std::abs(a % width - b % width);
}

}  // namespace

SokobanDomain::SokobanDomain(int width, int height, std::vector<bool> walls,
                             std::vector<int> targets, int player, std::vector<int> boxes)
    : width_(width), height_(height), walls_(std::move(walls)), targets_(std::move(targets)) {
  if (width < 3 || height < 3 || width * height > 256) {
    throw Error(ErrorCode::InvalidInstance, "Sokoban grid must be at least 3x3 and at most 256 cells");
  }
  if (walls_.size() != static_cast<std::size_t>(width * height)) {
    throw Error(ErrorCode::InvalidInstance, "Sokoban wall mask has wrong size");
  }
  if (targets_.empty() || targets_.size() + 1 > kMaxStateBytes) {
    throw Error(ErrorCode::InvalidInstance, "Sokoban needs 1..31 targets");
  }
  std::sort(targets_.begin(), targets_.end());
  is_target_.assign(walls_.size(), false);
  for (int t : targets_) {
    if (walls_[t] || is_target_[t]) throw Error(ErrorCode::InvalidInstance, "bad Sokoban target");
    is_target_[t] = true;
  }
  if (boxes.size() != targets_.size()) {
    throw Error(ErrorCode::InvalidInstance, "Sokoban box count differs from target count");
  }
  initial_ = make_state(player, std::move(boxes));
  validate(initial_);
}

State SokobanDomain::make_state(int player, std::vector<int> boxes) const {
  std::sort(boxes.begin(), boxes.end());
  std::vector<std::uint8_t> bytes;
  bytes.push_back(static_cast<std::uint8_t>(player));
  for (int b : boxes) bytes.push_back(static_cast<std::uint8_t>(b));
  return State(bytes);
}

std::vector<int> SokobanDomain::boxes(const State& s) const {
  std::vector<int> out;
  for (std::size_t i = 1; i < s.size(); ++i) out.push_back(s[i]);
  return out;
}

std::shared_ptr<const SokobanDomain> SokobanDomain::from_ascii(const std::vector<std::string>& rows) {
  if (rows.empty()) throw Error(ErrorCode::InvalidInstance, "empty Sokoban grid");
  const int height = static_cast<int>(rows.size());
  int width = 0;
  for (const auto& r : rows) width = std::max(width, static_cast<int>(r.size()));
  std::vector<bool> walls(static_cast<std::size_t>(width * height), false);
  std::vector<int> targets, boxes;
  int player = -1;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const char ch = c < static_cast<int>(rows[r].size()) ? rows[r][c] : ' ';
      const int cell = r * width + c;
      switch (ch) {
        case '#': walls[cell] = true; break;
        case ' ': case '-': case '_': break;
        case '.': targets.push_back(cell); break;
        case '$': boxes.push_back(cell); break;
        case '*': boxes.push_back(cell); targets.push_back(cell); break;
        case '@':
          if (player >= 0) throw Error(ErrorCode::InvalidInstance, "two Sokoban players");
          player = cell;
          break;
        case '+':
          if (player >= 0) throw Error(ErrorCode::InvalidInstance, "two Sokoban players");
          player = cell;
          targets.push_back(cell);
          break;
        default:
          throw Error(ErrorCode::InvalidInstance, std::string("unknown Sokoban cell '") + ch + "'");
      }
    }
  }
  if (player < 0) throw Error(ErrorCode::InvalidInstance, "Sokoban grid has no player");
  return std::make_shared<SokobanDomain>(width, height, std::move(walls), std::move(targets),
                                         player, std::move(boxes));
}

std::shared_ptr<const SokobanDomain> SokobanDomain::from_instance(const Instance& instance) {
  return from_ascii(instance.initial.at("grid").get<std::vector<std::string>>());
}

std::vector<std::string> SokobanDomain::to_ascii(const State& s) const {
  std::vector<std::string> rows(static_cast<std::size_t>(height_), std::string(static_cast<std::size_t>(width_), ' '));
  std::vector<bool> box(walls_.size(), false);
  for (std::size_t i = 1; i < s.size(); ++i) box[s[i]] = true;
  for (int cell = 0; cell < width_ * height_; ++cell) {
    char ch = ' ';
    if (walls_[cell]) ch = '#';
    else if (box[cell]) ch = is_target_[cell] ? '*' : '$';
    else if (cell == s[0]) ch = is_target_[cell] ? '+' : '@';
    else if (is_target_[cell]) ch = '.';
    rows[cell / width_][cell % width_] = ch;
  }
  return rows;
}

int SokobanDomain::step(int cell, Action a) const {
  const int r = cell / width_ + row_delta(a);
  const int c = cell % width_ + col_delta(a);
  if (r < 0 || c < 0 || r >= height_ || c >= width_) return -1;
  return r * width_ + c;
}

std::optional<State> SokobanDomain::apply(const State& s, Action a) const {
  const int next = step(s[0], a);
  if (next < 0 || walls_[next]) return std::nullopt;
  State out = s;
  out[0] = static_cast<std::uint8_t>(next);
  const std::size_t n = s.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (s[i] != next) continue;
    const int beyond = step(next, a);
    if (beyond < 0 || walls_[beyond]) return std::nullopt;
    for (std::size_t j = 1; j < n; ++j) {
      if (s[j] == beyond) return std::nullopt;
    }
    out[i] = static_cast<std::uint8_t>(beyond);
    // Restore sorted order by bubbling the moved box.
    std::size_t k = i;
    while (k > 1 && out[k - 1] > out[k]) { std::swap(out[k - 1], out[k]); --k; }
    while (k + 1 < n && out[k + 1] < out[k]) { std::swap(out[k + 1], out[k]); ++k; }
    break;
  }
  return out;
}

bool SokobanDomain::is_goal(const State& s) const {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!is_target_[s[i]]) return false;
  }
  return true;
}

double SokobanDomain::heuristic(const State& s) const {
  // Greedy box-to-target matching on Manhattan distance, plus the walk needed
  // for the player to stand next to the closest misplaced box.
  const auto bx = boxes(s);
  std::vector<std::tuple<int, int, int>> pairs;
  for (std::size_t b = 0; b < bx.size(); ++b) {
    for (std::size_t t = 0; t < targets_.size(); ++t) {
      pairs.emplace_back(manhattan(bx[b], targets_[t], width_), static_cast<int>(b), static_cast<int>(t));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<bool> box_used(bx.size(), false), target_used(targets_.size(), false);
  int matching = 0;
  for (const auto& [d, b, t] : pairs) {
    if (box_used[b] || target_used[t]) continue;
    box_used[b] = target_used[t] = true;
    matching += d;
  }
  int approach = -1;
  for (int b : bx) {
    if (is_target_[b]) continue;
    const int d = std::max(0, manhattan(s[0], b, width_) - 1);
    if (approach < 0 || d < approach) approach = d;
  }
  return matching + std::max(approach, 0);
}

double SokobanDomain::admissible_heuristic(const State& s) const {
  // Every push moves one box by one cell and costs at least one move.
  int sum = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    int best = -1;
    for (int t : targets_) {
      const int d = manhattan(s[i], t, width_);
      if (best < 0 || d < best) best = d;
    }
    sum += best;
  }
  return sum;
}

void SokobanDomain::validate(const State& s) const {
  if (s.size() != targets_.size() + 1) throw Error(ErrorCode::InvalidInstance, "Sokoban state has wrong size");
  const int cells = width_ * height_;
  if (s[0] >= cells || walls_[s[0]]) throw Error(ErrorCode::InvalidInstance, "Sokoban player inside a wall");
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] >= cells || walls_[s[i]]) throw Error(ErrorCode::InvalidInstance, "Sokoban box inside a wall");
    if (s[i] == s[0]) throw Error(ErrorCode::InvalidInstance, "Sokoban player inside a box");
    if (i > 1 && s[i] <= s[i - 1]) throw Error(ErrorCode::InvalidInstance, "Sokoban boxes not distinct");
  }
}

std::string SokobanDomain::describe(const State& s) const {
  std::string out;
  for (const auto& row : to_ascii(s)) out += row + "\n";
  return out;
}

Instance SokobanDomain::generate(const json& params, std::uint64_t seed) {
  const int width = detail::param_int(params, "width", 8, 5, 16);
  const int height = detail::param_int(params, "height", 8, 5, 16);
  if (width * height > 256) throw Error(ErrorCode::ParamsOutOfRange, "Sokoban grid larger than 256 cells");
  const int interior = (width - 2) * (height - 2);
  const int n_boxes = detail::param_int(params, "boxes", 2, 1, 6);
  const int n_walls = detail::param_int(params, "walls", 4, 0, interior / 3);
  const int steps = detail::param_int(params, "reverse_steps", 60, 1, 100000);
  if (n_boxes + 1 > interior - n_walls) throw Error(ErrorCode::ParamsOutOfRange, "too many boxes for the room");

  Rng rng(derive_seed(seed, 0x50c0));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<bool> walls(static_cast<std::size_t>(width * height), false);
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        if (r == 0 || c == 0 || r == height - 1 || c == width - 1) walls[r * width + c] = true;
      }
    }
    std::vector<int> floor;
    for (int cell = 0; cell < width * height; ++cell) if (!walls[cell]) floor.push_back(cell);
    rng.shuffle(floor);
    for (int i = 0; i < n_walls; ++i) walls[floor[i]] = true;
    floor.erase(floor.begin(), floor.begin() + n_walls);

    // Floor must be a single connected region.
    std::vector<bool> seen(walls.size(), false);
    std::deque<int> q{floor.front()};
    seen[floor.front()] = true;
    std::size_t reached = 0;
    while (!q.empty()) {
      const int cell = q.front();
      q.pop_front();
      ++reached;
      for (Action a : kAllActions) {
        const int nb = cell + row_delta(a) * width + col_delta(a);
        if (!walls[nb] && !seen[nb]) { seen[nb] = true; q.push_back(nb); }
      }
    }
    if (reached != floor.size()) continue;

    std::vector<int> targets(floor.begin(), floor.begin() + n_boxes);
    std::vector<bool> box(walls.size(), false);
    for (int t : targets) box[t] = true;
    int player = floor[static_cast<std::size_t>(n_boxes)];

    // Reverse play: moves and pulls. Reversing the recorded steps yields a
    // forward solution made of moves and pushes.
    std::vector<Action> reverse_steps;
    int pulls = 0;
    for (int i = 0; i < steps; ++i) {
      const Action a = kAllActions[rng.below(kNumActions)];
      const int next = player + row_delta(a) * width + col_delta(a);
      if (walls[next] || box[next]) continue;
      const int behind = player - row_delta(a) * width - col_delta(a);
      if (box[behind] && rng.bernoulli(0.75)) {
        box[behind] = false;
        box[player] = true;
        ++pulls;
      }
      player = next;
      reverse_steps.push_back(a);
    }
    bool solved = true;
    std::vector<int> boxes;
    for (int cell = 0; cell < width * height; ++cell) {
      if (box[cell]) {
        boxes.push_back(cell);
        if (std::find(targets.begin(), targets.end(), cell) == targets.end()) solved = false;
      }
    }
    if (solved || pulls == 0) continue;

    SokobanDomain dom(width, height, walls, targets, player, boxes);
    Instance out;
    out.domain = DomainId::Sokoban;
    out.seed = seed;
    out.params = json{{"width", width}, {"height", height}, {"boxes", n_boxes},
                      {"walls", n_walls}, {"reverse_steps", steps}};
    out.initial = json{{"grid", dom.to_ascii(dom.initial_state())}};
    for (auto it = reverse_steps.rbegin(); it != reverse_steps.rend(); ++it) {
      out.witness.push_back(inverse(*it));
    }
    return out;
  }
  throw Error(ErrorCode::ParamsOutOfRange, "could not generate a Sokoban layout with these params");
}

}  // namespace subsearch
