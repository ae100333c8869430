#include "subsearch/domain.hpp"

#include "subsearch/domains.hpp"

namespace subsearch {

std::string_view to_string(DomainId id) {
  switch (id) {
    case DomainId::Stp: return "stp";
    case DomainId::Sokoban: return "sokoban";
    case DomainId::BoxWorld: return "boxworld";
    case DomainId::Tsp: return "tsp";
  }
  return "unknown";
}

DomainId parse_domain(std::string_view name) {
  if (name == "stp") return DomainId::Stp;
  if (name == "sokoban") return DomainId::Sokoban;
  if (name == "boxworld") return DomainId::BoxWorld;
  if (name == "tsp") return DomainId::Tsp;
  throw Error(ErrorCode::InvalidArgument, "unknown domain '" + std::string(name) + "'");
}

std::uint64_t Instance::fingerprint() const {
  return hash_combine(fnv1a64(to_string(domain)), fnv1a64(initial.dump()));
}

json to_json(const Instance& instance) {
  json j;
  j["domain"] = to_string(instance.domain);
  j["seed"] = instance.seed;
  j["params"] = instance.params;
  j["initial"] = instance.initial;
  json w = json::array();
  for (Action a : instance.witness) w.push_back(std::string(1, action_char(a)));
  j["witness"] = std::move(w);
  return j;
}

Instance instance_from_json(const json& j) {
  if (!j.is_object() || !j.contains("domain") || !j.contains("initial")) {
    throw Error(ErrorCode::InvalidInstance, "instance JSON needs 'domain' and 'initial'");
  }
  Instance out;
  try {
    out.domain = parse_domain(j.at("domain").get<std::string>());
    out.seed = j.value("seed", std::uint64_t{0});
    out.params = j.value("params", json::object());
    out.initial = j.at("initial");
    if (j.contains("witness")) {
      for (const auto& a : j.at("witness")) {
        const auto s = a.get<std::string>();
        if (s.size() != 1) throw Error(ErrorCode::InvalidInstance, "bad witness action");
        auto act = parse_action(s[0]);
        if (!act) throw Error(ErrorCode::InvalidInstance, "bad witness action");
        out.witness.push_back(*act);
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInstance, std::string("instance JSON: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) {
      throw Error(ErrorCode::InvalidInstance, e.what());
    }
    throw;
  }
  return out;
}

LegalMoves Domain::legal_moves(const State& s) const {
  LegalMoves out;
  for (Action a : kAllActions) {
    if (auto next = apply(s, a)) {
      out.actions[out.count] = a;
      out.successors[out.count] = *next;
      ++out.count;
    }
  }
  return out;
}

std::vector<Action> Domain::legal_actions(const State& s) const {
  std::vector<Action> out;
  for (Action a : kAllActions) {
    if (apply(s, a)) out.push_back(a);
  }
  return out;
}

std::shared_ptr<const Domain> make_domain(const Instance& instance) {
  try {
    switch (instance.domain) {
      case DomainId::Stp: return StpDomain::from_instance(instance);
      case DomainId::Sokoban: return SokobanDomain::from_instance(instance);
      case DomainId::BoxWorld: return BoxWorldDomain::from_instance(instance);
      case DomainId::Tsp: return TspDomain::from_instance(instance);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInstance, std::string("malformed initial state: ") + e.what());
  }
  throw Error(ErrorCode::InvalidInstance, "unknown domain");
}

Instance generate_instance(DomainId domain, const json& params, std::uint64_t seed) {
  const json p = params.is_null() ? json::object() : params;
  if (!p.is_object()) throw Error(ErrorCode::ParamsOutOfRange, "params must be an object");
  switch (domain) {
    case DomainId::Stp: return StpDomain::generate(p, seed);
    case DomainId::Sokoban: return SokobanDomain::generate(p, seed);
    case DomainId::BoxWorld: return BoxWorldDomain::generate(p, seed);
    case DomainId::Tsp: return TspDomain::generate(p, seed);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown domain");
}

std::optional<State> replay(const Domain& domain, State s, std::span<const Action> actions) {
  for (Action a : actions) {
    auto next = domain.apply(s, a);
    if (!next) return std::nullopt;
    s = *next;
  }
  return s;
}

bool goal_test(const Domain& domain, const State& s) { return domain.is_goal(s); }

namespace detail {

int param_int(const json& params, const char* key, int fallback, int lo, int hi) {
  if (!params.contains(key)) return fallback;
  const auto& v = params.at(key);
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::ParamsOutOfRange, std::string("param '") + key + "' must be an integer");
  }
  const auto x = v.get<long long>();
  if (x < lo || x > hi) {
    throw Error(ErrorCode::ParamsOutOfRange,
                std::string("param '") + key + "' = " + std::to_string(x) + " outside [" +
                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(x);
}

bool param_bool(const json& params, const char* key, bool fallback) {
  if (!params.contains(key)) return fallback;
  const auto& v = params.at(key);
  if (!v.is_boolean()) {
    throw Error(ErrorCode::ParamsOutOfRange, std::string("param '") + key + "' must be a boolean");
  }
  return v.get<bool>();
}

json cell_json(int cell, int width) { return json::array({cell / width, cell % width}); }

int cell_from_json(const json& j, int width, int height) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorCode::InvalidInstance, "cell must be [row, col]");
  }
  const int r = j[0].get<int>();
  const int c = j[1].get<int>();
  if (r < 0 || c < 0 || r >= height || c >= width) {
    throw Error(ErrorCode::InvalidInstance, "cell outside the grid");
  }
  return r * width + c;
}

}  // namespace detail

}  // namespace subsearch
