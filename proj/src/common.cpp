#include "subsearch/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace subsearch {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::ParamsOutOfRange: return "ParamsOutOfRange";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Io: return "Io";
    case ErrorCode::EdgeNotInContext: return "EdgeNotInContext";
    case ErrorCode::NoLegalEdges: return "NoLegalEdges";
    case ErrorCode::NegativeHeuristic: return "NegativeHeuristic";
    case ErrorCode::ZeroDist: return "ZeroDist";
    case ErrorCode::DanglingParent: return "DanglingParent";
    case ErrorCode::MissingInstrumentation: return "MissingInstrumentation";
    case ErrorCode::InvalidWitness: return "InvalidWitness";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::OracleBudgetExceeded: return "OracleBudgetExceeded";
    case ErrorCode::InadmissibleHeuristic: return "InadmissibleHeuristic";
    case ErrorCode::MixedConfigHash: return "MixedConfigHash";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

char action_char(Action a) {
  static constexpr char kChars[] = {'N', 'E', 'S', 'W'};
  return kChars[static_cast<int>(a)];
}

std::optional<Action> parse_action(char c) {
  switch (c) {
    case 'N': return Action::North;
    case 'E': return Action::East;
    case 'S': return Action::South;
    case 'W': return Action::West;
    default: return std::nullopt;
  }
}

Action inverse(Action a) {
  return static_cast<Action>((static_cast<int>(a) + 2) % kNumActions);
}

std::string actions_to_string(std::span<const Action> actions) {
  std::string out;
  out.reserve(actions.size());
  for (Action a : actions) out.push_back(action_char(a));
  return out;
}

std::vector<Action> actions_from_string(std::string_view s) {
  std::vector<Action> out;
  out.reserve(s.size());
  for (char c : s) {
    auto a = parse_action(c);
    if (!a) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string("unknown action character '") + c + "'");
    }
    out.push_back(*a);
  }
  return out;
}

State::State(std::span<const std::uint8_t> bytes) {
  if (bytes.size() > kMaxStateBytes) {
    throw Error(ErrorCode::Internal, "state encoding exceeds capacity");
  }
  std::copy(bytes.begin(), bytes.end(), data_.begin());
  size_ = static_cast<std::uint8_t>(bytes.size());
}

std::uint64_t State::hash() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ size_;
  // Eight bytes at a time; the zero tail keeps this well defined.
  for (std::size_t i = 0; i < size_; i += 8) {
    std::uint64_t word = 0;
    std::memcpy(&word, data_.data() + i, 8);
    h = splitmix64(h ^ word);
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) noexcept {
  return splitmix64(seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng::Rng(std::uint64_t seed) {
  for (auto& w : s_) {
    seed += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = seed;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    w = z ^ (z >> 31);
  }
}

std::uint64_t Rng::next() {
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::Internal, "Rng::below(0)");
  // Rejection sampling on the top of the range removes modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

double Rng::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double log_sum_exp(std::span<const double> xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  if (m == kPosInf) return kPosInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace subsearch
