#include <doctest.h>

#include <cstdlib>
#include <string>

#include <json.hpp>

#include "subsearch/subsearch.h"

using nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  ss_string_free(s);
  return out;
}

const char* kConfig = R"({
  "domain": "stp",
  "params": {"width": 3, "walk_length": 10},
  "instances": {"count": 6, "base_seed": 2},
  "generator": {"kind": "greedy-rollout", "horizon": 4, "max_proposals": 2},
  "policy": {"epsilon": 0.5, "low": {"kind": "boltzmann"}},
  "eval": "levin-ts",
  "budget": {"max_expansions": [10, 100000]},
  "flags": {"instrument": true}
})";

}  // namespace

TEST_CASE("status names and errors") {
  CHECK(std::string(ss_status_name(SS_OK)) == "Ok");
  CHECK(std::string(ss_status_name(SS_ERR_CONFIG)) == "Config");
  CHECK(std::string(ss_status_name(SS_ERR_OUT_OF_MEMORY)) == "OutOfMemory");
  CHECK(std::string(ss_version()).size() > 0);

  ss_config* cfg = nullptr;
  CHECK(ss_config_from_json("{\"domain\": \"chess\"}", &cfg) == SS_ERR_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(std::string(ss_last_error()).find("chess") != std::string::npos);
  CHECK(ss_config_from_json("not json", &cfg) == SS_ERR_INVALID_ARGUMENT);
  CHECK(ss_config_from_json(nullptr, &cfg) == SS_ERR_INVALID_ARGUMENT);
  CHECK(ss_instance_generate("stp", "{\"width\": 40}", 1, nullptr) == SS_ERR_INVALID_ARGUMENT);
  ss_instance* inst = nullptr;
  CHECK(ss_instance_generate("stp", "{\"width\": 40}", 1, &inst) == SS_ERR_PARAMS_OUT_OF_RANGE);
}

TEST_CASE("instances round-trip through JSON") {
  ss_instance* a = nullptr;
  REQUIRE(ss_instance_generate("sokoban", "{\"boxes\": 2}", 5, &a) == SS_OK);
  char* text = nullptr;
  REQUIRE(ss_instance_to_json(a, &text) == SS_OK);
  const std::string s = take(text);
  ss_instance* b = nullptr;
  REQUIRE(ss_instance_from_json(s.c_str(), &b) == SS_OK);
  REQUIRE(ss_instance_to_json(b, &text) == SS_OK);
  CHECK(take(text) == s);
  int goal = -1;
  CHECK(ss_instance_is_goal_start(a, &goal) == SS_OK);
  CHECK(goal == 0);

  REQUIRE(ss_oracle_solve(a, "bfs", &text) == SS_OK);
  const json bfs = json::parse(take(text));
  REQUIRE(ss_oracle_solve(a, "idastar", &text) == SS_OK);
  const json ida = json::parse(take(text));
  CHECK(bfs["solvable"] == true);
  CHECK(bfs["solution"]["optimal_length"] == ida["solution"]["optimal_length"]);
  CHECK(ss_oracle_solve(a, "magic", &text) == SS_ERR_INVALID_ARGUMENT);
  ss_instance_free(a);
  ss_instance_free(b);
}

TEST_CASE("solve, bench and bound check through the C interface") {
  ss_config* cfg = nullptr;
  REQUIRE(ss_config_from_json(kConfig, &cfg) == SS_OK);
  char* text = nullptr;
  REQUIRE(ss_config_hash(cfg, &text) == SS_OK);
  const std::string hash = take(text);

  ss_instance* inst = nullptr;
  REQUIRE(ss_config_suite_instance(cfg, 0, &inst) == SS_OK);
  ss_result* res = nullptr;
  REQUIRE(ss_solve(cfg, inst, &res) == SS_OK);
  REQUIRE(ss_result_json(res, 0, &text) == SS_OK);
  const json solved = json::parse(take(text));
  CHECK(solved["config_hash"] == hash);
  CHECK(solved["result"]["solved"] == true);
  CHECK(solved["bounds"]["holds_witness"] == true);
  CHECK_FALSE(solved["result"].contains("wall_clock"));
  ss_result_free(res);

  ss_instance* other = nullptr;
  REQUIRE(ss_instance_generate("tsp", nullptr, 1, &other) == SS_OK);
  CHECK(ss_solve(cfg, other, &res) == SS_ERR_CONFIG);
  ss_instance_free(other);
  ss_instance_free(inst);

  REQUIRE(ss_bench(cfg, &res) == SS_OK);
  size_t failures = 99;
  CHECK(ss_result_failures(res, &failures) == SS_OK);
  CHECK(failures == 0);
  REQUIRE(ss_result_json(res, 1, &text) == SS_OK);
  const json bench = json::parse(take(text));
  CHECK(bench["rows"].size() == 6);
  REQUIRE(ss_result_csv(res, &text) == SS_OK);
  CHECK(take(text).rfind("config_hash,label,", 0) == 0);

  REQUIRE(ss_result_json(res, 0, &text) == SS_OK);
  const std::string doc = take(text);
  const char* docs[2] = {doc.c_str(), doc.c_str()};
  REQUIRE(ss_plotdata(docs, 2, &text) == SS_OK);
  CHECK(take(text).size() > doc.size() / 10);
  ss_result_free(res);

  REQUIRE(ss_bound_check(cfg, &res) == SS_OK);
  REQUIRE(ss_result_json(res, 0, &text) == SS_OK);
  CHECK(json::parse(take(text))["reports"].size() == 6);
  ss_result_free(res);

  REQUIRE(ss_sweep_eps(cfg, "[0.5]", "{\"epsilon\": 0.5, \"low_level\": true}", &res) == SS_OK);
  ss_result_free(res);
  CHECK(ss_sweep_eps(cfg, "[]", nullptr, &res) == SS_ERR_CONFIG);
  REQUIRE(ss_ablate_eval(cfg, "[\"levin-ts\", \"phs-dist\"]", &res) == SS_OK);
  ss_result_free(res);
  CHECK(ss_ablate_eval(cfg, "[\"dijkstra\"]", &res) == SS_ERR_CONFIG);
  ss_config_free(cfg);
}

TEST_CASE("demonstrations come out as JSON lines") {
  char* text = nullptr;
  REQUIRE(ss_build_demos("stp", "{\"width\": 3, \"walk_length\": 10}", 3, 7, 0.0, &text) == SS_OK);
  const std::string lines = take(text);
  int n = 0;
  for (char c : lines) n += c == '\n' ? 1 : 0;
  CHECK(n == 3);
  CHECK(ss_build_demos("stp", nullptr, 3, 7, 0.9, &text) == SS_ERR_INVALID_ARGUMENT);
}
