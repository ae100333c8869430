#pragma once

#include <memory>
#include <vector>

#include "subsearch/domain.hpp"

namespace subsearch {

// Sliding-tile puzzle. State bytes: tiles row-major (0 = blank) followed by
// the blank's cell index. Goal: tiles[i] == i, blank in the top-left corner.
class StpDomain final : public Domain {
 public:
  StpDomain(int width, std::vector<std::uint8_t> tiles);

  static std::shared_ptr<const StpDomain> from_instance(const Instance& instance);
  static Instance generate(const json& params, std::uint64_t seed);
  static State encode(int width, std::span<const std::uint8_t> tiles);
  static State goal_state(int width);

  int width() const { return width_; }
  std::vector<std::uint8_t> tiles(const State& s) const;
  int manhattan(const State& s) const;

  DomainId id() const override { return DomainId::Stp; }
  State initial_state() const override { return initial_; }
  std::optional<State> apply(const State& s, Action a) const override;
  bool is_goal(const State& s) const override;
  double heuristic(const State& s) const override;
  double admissible_heuristic(const State& s) const override;
  bool heuristic_is_admissible() const override { return true; }
  void validate(const State& s) const override;
  std::string describe(const State& s) const override;

 private:
  int width_;
  State initial_;
  State goal_;
};

// Sokoban. State bytes: player cell followed by the sorted box cells.
// ASCII rows use '#' wall, ' ' floor, '.' target, '$' box, '*' box on target,
// '@' player, '+' player on target.
class SokobanDomain final : public Domain {
 public:
  SokobanDomain(int width, int height, std::vector<bool> walls,
                std::vector<int> targets, int player, std::vector<int> boxes);

  static std::shared_ptr<const SokobanDomain> from_instance(const Instance& instance);
  static std::shared_ptr<const SokobanDomain> from_ascii(const std::vector<std::string>& rows);
  static Instance generate(const json& params, std::uint64_t seed);

  std::vector<std::string> to_ascii(const State& s) const;
  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<int>& targets() const { return targets_; }
  int player(const State& s) const { return s[0]; }
  std::vector<int> boxes(const State& s) const;
  State make_state(int player, std::vector<int> boxes) const;

  DomainId id() const override { return DomainId::Sokoban; }
  State initial_state() const override { return initial_; }
  std::optional<State> apply(const State& s, Action a) const override;
  bool is_goal(const State& s) const override;
  double heuristic(const State& s) const override;
  double admissible_heuristic(const State& s) const override;
  void validate(const State& s) const override;
  std::string describe(const State& s) const override;

 private:
  int step(int cell, Action a) const;  // -1 when leaving the grid

  int width_;
  int height_;
  std::vector<bool> walls_;
  std::vector<bool> is_target_;
  std::vector<int> targets_;
  State initial_;
};

// Box-World with single-cell locks. Walking onto a lock while holding a key of
// the lock's color opens it, consumes the key and hands over the lock's
// content (another key, or the gem). Walking onto a loose key picks it up and
// discards any key already held. The outer ring of cells is wall.
// State bytes: agent, held color (0xFF = none), gem flag, loose-key mask,
// opened-lock mask (4 bytes, little endian).
class BoxWorldDomain final : public Domain {
 public:
  static constexpr int kGem = -1;
  static constexpr std::uint8_t kNoKey = 0xFF;

  struct Lock {
    int cell;
    int color;
    int content;  // key color, or kGem
  };
  struct LooseKey {
    int cell;
    int color;
  };

  BoxWorldDomain(int width, int height, int agent, std::vector<LooseKey> loose_keys,
                 std::vector<Lock> locks, std::vector<int> chain);

  static std::shared_ptr<const BoxWorldDomain> from_instance(const Instance& instance);
  static Instance generate(const json& params, std::uint64_t seed);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<Lock>& locks() const { return locks_; }
  const std::vector<LooseKey>& loose_keys() const { return loose_; }
  const std::vector<int>& chain() const { return chain_; }
  int agent(const State& s) const { return s[0]; }
  std::optional<int> held_key(const State& s) const;
  bool gem_collected(const State& s) const { return s[2] != 0; }
  bool lock_open(const State& s, int lock) const;

  // Lengths of the dead-end branches (locks that never lead to the gem).
  std::vector<int> distractor_chain_lengths() const;

  DomainId id() const override { return DomainId::BoxWorld; }
  State initial_state() const override { return initial_; }
  std::optional<State> apply(const State& s, Action a) const override;
  bool is_goal(const State& s) const override { return gem_collected(s); }
  double heuristic(const State& s) const override;
  double admissible_heuristic(const State& s) const override;
  void validate(const State& s) const override;
  std::string describe(const State& s) const override;

 private:
  bool interior(int r, int c) const {
    return r > 0 && c > 0 && r < height_ - 1 && c < width_ - 1;
  }

  int width_;
  int height_;
  std::vector<LooseKey> loose_;
  std::vector<Lock> locks_;
  std::vector<int> chain_;
  std::vector<int> lock_at_;
  std::vector<int> loose_at_;
  State initial_;
};

// Grid travelling salesman: visit every city, then return to the start city.
// Entering a city's cell marks it visited. State bytes: agent cell, visited
// mask (4 bytes, little endian).
class TspDomain final : public Domain {
 public:
  TspDomain(int width, int height, std::vector<int> cities, int start, int agent,
            std::uint32_t visited);

  static std::shared_ptr<const TspDomain> from_instance(const Instance& instance);
  static Instance generate(const json& params, std::uint64_t seed);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<int>& cities() const { return cities_; }
  int start_city() const { return start_; }
  int agent(const State& s) const { return s[0]; }
  std::uint32_t visited(const State& s) const;
  State make_state(int agent, std::uint32_t visited) const;
  int manhattan(int a, int b) const;

  DomainId id() const override { return DomainId::Tsp; }
  State initial_state() const override { return initial_; }
  std::optional<State> apply(const State& s, Action a) const override;
  bool is_goal(const State& s) const override;
  double heuristic(const State& s) const override;
  double admissible_heuristic(const State& s) const override;
  void validate(const State& s) const override;
  std::string describe(const State& s) const override;

 private:
  int width_;
  int height_;
  std::vector<int> cities_;
  std::vector<int> city_at_;
  int start_;
  std::uint32_t all_mask_;
  State initial_;
};

namespace detail {
int param_int(const json& params, const char* key, int fallback, int lo, int hi);
bool param_bool(const json& params, const char* key, bool fallback);
json cell_json(int cell, int width);
int cell_from_json(const json& j, int width, int height);
}  // namespace detail

}  // namespace subsearch
