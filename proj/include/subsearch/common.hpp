#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace subsearch {

enum class ErrorCode {
  InvalidArgument,
  InvalidInstance,
  ParamsOutOfRange,
  Config,
  Io,
  EdgeNotInContext,
  NoLegalEdges,
  NegativeHeuristic,
  ZeroDist,
  DanglingParent,
  MissingInstrumentation,
  InvalidWitness,
  BudgetExceeded,
  OracleBudgetExceeded,
  InadmissibleHeuristic,
  MixedConfigHash,
  Internal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Grid move of the agent (or of the blank, for the sliding-tile puzzle).
// Numeric order N, E, S, W is the canonical enumeration order everywhere.
enum class Action : std::uint8_t { North = 0, East = 1, South = 2, West = 3 };

inline constexpr int kNumActions = 4;
inline constexpr std::array<Action, kNumActions> kAllActions = {
    Action::North, Action::East, Action::South, Action::West};

char action_char(Action a);
std::optional<Action> parse_action(char c);
Action inverse(Action a);
inline constexpr int row_delta(Action a) {
  return a == Action::North ? -1 : (a == Action::South ? 1 : 0);
}
inline constexpr int col_delta(Action a) {
  return a == Action::West ? -1 : (a == Action::East ? 1 : 0);
}

std::string actions_to_string(std::span<const Action> actions);
std::vector<Action> actions_from_string(std::string_view s);

inline constexpr std::size_t kMaxStateBytes = 32;

// Fixed-capacity packed domain state. Bytes past size() are always zero, so
// equality and hashing can look at the used prefix only.
class State {
 public:
  State() = default;
  explicit State(std::span<const std::uint8_t> bytes);

  std::size_t size() const noexcept { return size_; }
  std::span<const std::uint8_t> bytes() const noexcept {
    return {data_.data(), size_};
  }
  std::uint8_t operator[](std::size_t i) const noexcept { return data_[i]; }
  std::uint8_t& operator[](std::size_t i) noexcept { return data_[i]; }

  std::uint64_t hash() const noexcept;

  friend bool operator==(const State& a, const State& b) noexcept {
    return a.size_ == b.size_ && a.data_ == b.data_;
  }

 private:
  std::array<std::uint8_t, kMaxStateBytes> data_{};
  std::uint8_t size_ = 0;
};

struct StateHash {
  std::size_t operator()(const State& s) const noexcept {
    return static_cast<std::size_t>(s.hash());
  }
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) noexcept;
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

// Counter-based seed derivation: every random stream in the project is keyed
// by (base seed, index) through this function, never by a global generator.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return splitmix64(hash_combine(splitmix64(base), index));
}

// xoshiro256** seeded through splitmix64. Seeding is cheap, which matters
// because generators open a fresh stream per expanded state. Bounded draws are
// done here rather than with <random> distributions to keep outputs portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  double uniform01();
  bool bernoulli(double p) { return uniform01() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::array<std::uint64_t, 4> s_{};
};

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

// log(sum(exp(x_i))), -inf for an empty range.
double log_sum_exp(std::span<const double> xs);

}  // namespace subsearch
