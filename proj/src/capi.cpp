#include "subsearch/subsearch.h"

#include <cstring>
#include <new>
#include <string>

#include "subsearch/harness.hpp"
#include "subsearch/oracle.hpp"

using namespace subsearch;

struct ss_instance {
  Instance inst;
};

struct ss_config {
  RunConfig config;
};

struct ss_result {
  json with_clock;
  json without_clock;
  std::string csv;
  std::size_t failures = 0;
};

namespace {

thread_local std::string g_last_error;

ss_status status_of(ErrorCode code) { return static_cast<ss_status>(static_cast<int>(code) + 1); }

template <class F>
ss_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return SS_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const json::exception& e) {
    g_last_error = e.what();
    return SS_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SS_ERR_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SS_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse(const char* text, const char* what) {
  require(text, what);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + ": " + e.what());
  }
}

json parse_or(const char* text, const char* what, json fallback) {
  return text ? parse(text, what) : fallback;
}

ss_result* make_result(json with_clock, json without_clock, std::string csv, std::size_t failures) {
  return new ss_result{std::move(with_clock), std::move(without_clock), std::move(csv), failures};
}

}  // namespace

extern "C" {

const char* ss_version(void) { return "1.0.0"; }

const char* ss_status_name(ss_status status) {
  if (status == SS_OK) return "Ok";
  if (status == SS_ERR_OUT_OF_MEMORY) return "OutOfMemory";
  if (status < SS_OK || status > SS_ERR_INTERNAL) return "Unknown";
  return to_string(static_cast<ErrorCode>(static_cast<int>(status) - 1)).data();
}

const char* ss_last_error(void) { return g_last_error.c_str(); }

void ss_string_free(char* s) { std::free(s); }

ss_status ss_instance_generate(const char* domain, const char* params_json, uint64_t seed, ss_instance** out) {
  return guarded([&] {
    require(domain, "domain");
    require(out, "out");
    *out = new ss_instance{generate_instance(parse_domain(domain), parse_or(params_json, "params", json::object()), seed)};
  });
}

ss_status ss_instance_from_json(const char* text, ss_instance** out) {
  return guarded([&] {
    require(out, "out");
    *out = new ss_instance{instance_from_json(parse(text, "instance"))};
  });
}

ss_status ss_instance_to_json(const ss_instance* inst, char** out) {
  return guarded([&] {
    require(inst, "instance");
    require(out, "out");
    *out = dup(to_json(inst->inst).dump());
  });
}

ss_status ss_instance_is_goal_start(const ss_instance* inst, int* out) {
  return guarded([&] {
    require(inst, "instance");
    require(out, "out");
    const auto dom = make_domain(inst->inst);
    *out = dom->is_goal(dom->initial_state()) ? 1 : 0;
  });
}

void ss_instance_free(ss_instance* inst) { delete inst; }

ss_status ss_config_from_json(const char* text, ss_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new ss_config{config_from_json(parse(text, "config"))};
  });
}

ss_status ss_config_to_json(const ss_config* cfg, char** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    *out = dup(to_json(cfg->config).dump());
  });
}

ss_status ss_config_hash(const ss_config* cfg, char** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    *out = dup(config_hash(cfg->config));
  });
}

ss_status ss_config_suite_instance(const ss_config* cfg, int index, ss_instance** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    if (index < 0) throw Error(ErrorCode::InvalidArgument, "instance index must be non-negative");
    *out = new ss_instance{suite_instance(cfg->config, index)};
  });
}

void ss_config_free(ss_config* cfg) { delete cfg; }

ss_status ss_solve(const ss_config* cfg, const ss_instance* inst, ss_result** out) {
  return guarded([&] {
    require(cfg, "config");
    require(inst, "instance");
    require(out, "out");
    const RunConfig& c = cfg->config;
    if (inst->inst.domain != c.domain) {
      throw Error(ErrorCode::Config, "instance domain '" + std::string(to_string(inst->inst.domain)) +
                                         "' does not match config domain '" + std::string(to_string(c.domain)) + "'");
    }
    const SuiteResources res = load_resources(c);
    const auto dom = make_domain(inst->inst);
    const auto expander = make_expander(c, inst->inst, dom, res);
    const auto outcome = search(inst->inst, expander, c.eval, make_budget(c), SearchOptions{c.dedup, c.instrument});
    json body{{"config_hash", config_hash(c)}, {"instance_seed", inst->inst.seed}};
    std::size_t failures = 0;
    if (c.instrument && c.eval != EvalKind::Gbfs && c.eval != EvalKind::AStarDist && !inst->inst.witness.empty()) {
      try {
        body["bounds"] = to_json(bound_report(c, inst->inst, expander, outcome));
      } catch (const Error& e) {
        body["bounds"] = json{{"error", std::string(to_string(e.code())) + ": " + e.what()}};
        ++failures;
      }
    }
    json with = body, without = body;
    with["result"] = to_json(outcome.result, true);
    without["result"] = to_json(outcome.result, false);
    *out = make_result(std::move(with), std::move(without), "", failures);
  });
}

ss_status ss_bench(const ss_config* cfg, ss_result** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    const ResultsTable t = run_bench(cfg->config);
    *out = make_result(t.to_json(true), t.to_json(false), t.to_csv(), t.failures());
  });
}

ss_status ss_sweep_eps(const ss_config* cfg, const char* eps_json, const char* baseline_json, ss_result** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    const SweepResult r =
        sweep_epsilon(cfg->config, parse(eps_json, "epsilon list"), parse_or(baseline_json, "baseline", nullptr));
    std::size_t failures = r.baseline.table.failures();
    for (const auto& e : r.entries) failures += e.table.failures();
    json j = r.to_json();
    *out = make_result(j, j, r.to_csv(), failures);
  });
}

ss_status ss_ablate_eval(const ss_config* cfg, const char* kinds_json, ss_result** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    std::vector<EvalKind> kinds{EvalKind::PhsStarScaled, EvalKind::LevinTs, EvalKind::PhsDepth, EvalKind::PhsDist};
    if (kinds_json) {
      kinds.clear();
      for (const auto& k : parse(kinds_json, "evaluation list")) kinds.push_back(parse_eval_kind(k.get<std::string>()));
    }
    const AblationResult r = ablate_eval(cfg->config, kinds);
    std::size_t failures = 0;
    for (const auto& cell : r.cells) failures += cell.second.failures();
    json j = r.to_json();
    *out = make_result(j, j, r.to_csv(), failures);
  });
}

ss_status ss_bound_check(const ss_config* cfg, ss_result** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    const BoundSuite s = bound_check(cfg->config);
    std::size_t failures = 0;
    for (const auto& e : s.errors) failures += e.empty() ? 0 : 1;
    json j = s.to_json();
    *out = make_result(j, j, "", failures);
  });
}

ss_status ss_result_json(const ss_result* res, int include_wall_clock, char** out) {
  return guarded([&] {
    require(res, "result");
    require(out, "out");
    *out = dup((include_wall_clock ? res->with_clock : res->without_clock).dump(2) + "\n");
  });
}

ss_status ss_result_csv(const ss_result* res, char** out) {
  return guarded([&] {
    require(res, "result");
    require(out, "out");
    *out = dup(res->csv);
  });
}

ss_status ss_result_failures(const ss_result* res, size_t* out) {
  return guarded([&] {
    require(res, "result");
    require(out, "out");
    *out = res->failures;
  });
}

void ss_result_free(ss_result* res) { delete res; }

ss_status ss_build_demos(const char* domain, const char* params_json, int count, uint64_t base_seed, double noise,
                         char** out_jsonl) {
  return guarded([&] {
    require(domain, "domain");
    require(out_jsonl, "out");
    const auto d = build_demo_dataset(parse_domain(domain), parse_or(params_json, "params", json::object()), count,
                                      base_seed, noise);
    *out_jsonl = dup(to_jsonl(d));
  });
}

ss_status ss_oracle_solve(const ss_instance* inst, const char* method, char** out_json) {
  return guarded([&] {
    require(inst, "instance");
    require(method, "method");
    require(out_json, "out");
    const auto dom = make_domain(inst->inst);
    const std::string m = method;
    std::optional<oracle::OracleResult> r;
    if (m == "bfs") {
      r = oracle::bfs_solve(*dom, dom->initial_state());
    } else if (m == "idastar") {
      r = oracle::idastar_solve(*dom, dom->initial_state(), oracle::IdaHeuristic::Admissible);
    } else if (m == "idastar-domain") {
      r = oracle::idastar_solve(*dom, dom->initial_state(), oracle::IdaHeuristic::Domain);
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown oracle method '" + m + "'");
    }
    json j{{"method", m}, {"instance_seed", inst->inst.seed}, {"solvable", r.has_value()}};
    if (r) j["solution"] = oracle::to_json(*r);
    *out_json = dup(j.dump());
  });
}

ss_status ss_plotdata(const char* const* results_json, size_t count, char** out_csv) {
  return guarded([&] {
    require(out_csv, "out");
    if (count > 0) require(results_json, "results");
    std::vector<json> docs;
    for (size_t i = 0; i < count; ++i) docs.push_back(parse(results_json[i], "results document"));
    *out_csv = dup(plotdata(docs));
  });
}

}  // extern "C"
