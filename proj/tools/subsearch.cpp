#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "subsearch/subsearch.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitPartial = 2;
constexpr int kExitConfig = 3;

struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) { throw Failure{code, message}; }

void check(ss_status st) {
  if (st == SS_OK) return;
  const std::string msg = std::string(ss_status_name(st)) + ": " + ss_last_error();
  const bool config = st == SS_ERR_CONFIG || st == SS_ERR_PARAMS_OUT_OF_RANGE || st == SS_ERR_MIXED_CONFIG_HASH;
  fail(config ? kExitConfig : kExitError, msg);
}

std::string take(char* s) {
  std::string out = s ? s : "";
  ss_string_free(s);
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(kExitError, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(kExitError, "cannot write " + path.string());
  out << text;
}

// Values are parsed as JSON when possible, otherwise taken as strings.
void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) fail(kExitConfig, "override must look like key.path=value: " + assignment);
  const std::string path = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json* node = &j;
  std::stringstream parts(path);
  std::string key;
  std::vector<std::string> keys;
  while (std::getline(parts, key, '.')) keys.push_back(key);
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    if (!node->is_object()) fail(kExitConfig, "override path crosses a non-object: " + path);
    node = &(*node)[keys[i]];
    if (node->is_null()) *node = json::object();
  }
  (*node)[keys.back()] = value;
}

struct ConfigArgs {
  std::string path;
  std::vector<std::string> sets;
  int count = -1;
  long long seed = -1;
  int parallelism = -1;
  std::string out;

  void attach(CLI::App* app, bool with_out = true) {
    app->add_option("-c,--config", path, "JSON run configuration")->required();
    app->add_option("--set", sets, "Override a config entry, e.g. policy.epsilon=0.5");
    app->add_option("--count", count, "Override instances.count");
    app->add_option("--seed", seed, "Override instances.base_seed");
    app->add_option("-j,--parallelism", parallelism, "Worker threads");
    if (with_out) app->add_option("-o,--out", out, "Output directory");
  }

  json document() const {
    json j = json::parse(read_text(path), nullptr, false);
    if (j.is_discarded() || !j.is_object()) fail(kExitConfig, "config " + path + " is not a JSON object");
    for (const auto& s : sets) apply_override(j, s);
    if (count >= 0) j["instances"]["count"] = count;
    if (seed >= 0) j["instances"]["base_seed"] = seed;
    if (parallelism > 0) j["parallelism"] = parallelism;
    if (!out.empty()) j["output"] = out;
    return j;
  }

  fs::path output_dir(const json& doc) const {
    const std::string dir = doc.value("output", std::string());
    return dir.empty() ? fs::path("out") : fs::path(dir);
  }
};

struct Config {
  ss_config* handle = nullptr;
  explicit Config(const json& doc) { check(ss_config_from_json(doc.dump().c_str(), &handle)); }
  ~Config() { ss_config_free(handle); }
  Config(const Config&) = delete;
  Config& operator=(const Config&) = delete;
};

struct Result {
  ss_result* handle = nullptr;
  ~Result() { ss_result_free(handle); }
  std::string json_text(bool clock = true) const {
    char* s = nullptr;
    check(ss_result_json(handle, clock ? 1 : 0, &s));
    return take(s);
  }
  std::string csv() const {
    char* s = nullptr;
    check(ss_result_csv(handle, &s));
    return take(s);
  }
  std::size_t failures() const {
    std::size_t n = 0;
    check(ss_result_failures(handle, &n));
    return n;
  }
};

int finish(const Result& r, const std::string& what) {
  const std::size_t f = r.failures();
  if (f > 0) {
    std::cerr << what << ": " << f << " run(s) failed\n";
    return kExitPartial;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subgoal search with complete low-level fallback"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ss_version()));

  ConfigArgs gen_args;
  auto* gen = app.add_subcommand("generate", "Write the suite's instances as JSON files plus a manifest");
  gen_args.attach(gen);

  ConfigArgs solve_args;
  std::string instance_path;
  std::string solve_out;
  auto* solve = app.add_subcommand("solve", "Solve one instance and print the result JSON");
  solve_args.attach(solve, false);
  solve->add_option("-i,--instance", instance_path, "Instance JSON file")->required();
  solve->add_option("-o,--out", solve_out, "Write the result here instead of stdout");

  ConfigArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Run the suite; writes results.json and results.csv");
  bench_args.attach(bench);

  ConfigArgs sweep_args;
  std::vector<std::string> eps_list{"1e-5", "1e-3", "1e-1", "to-zero"};
  std::string baseline;
  auto* sweep = app.add_subcommand("sweep-eps", "Unsolved ratio against a baseline for several epsilons");
  sweep_args.attach(sweep);
  sweep->add_option("--eps", eps_list, "Epsilon values; 'to-zero' for the lexicographic limit")->delimiter(',');
  sweep->add_option("--baseline", baseline, "JSON patch for the baseline policy section");

  ConfigArgs ablate_args;
  std::vector<std::string> evals;
  auto* ablate = app.add_subcommand("ablate-eval", "Success per budget for several evaluation functions");
  ablate_args.attach(ablate);
  ablate->add_option("--evals", evals, "Evaluation names (default: the four PHS variants)")->delimiter(',');

  ConfigArgs bound_args;
  auto* bound = app.add_subcommand("bound-check", "Check the search-loss bounds; writes bounds.json");
  bound_args.attach(bound);

  std::string demo_domain = "stp", demo_params = "{}", demo_out;
  int demo_count = 100;
  unsigned long long demo_seed = 1;
  double demo_noise = 0.0;
  auto* demos = app.add_subcommand("demos", "Build an oracle demonstration dataset (JSON lines)");
  demos->add_option("--domain", demo_domain, "stp | sokoban | boxworld | tsp");
  demos->add_option("--params", demo_params, "Generator parameters as JSON");
  demos->add_option("--count", demo_count, "Number of trajectories");
  demos->add_option("--seed", demo_seed, "Base seed");
  demos->add_option("--noise", demo_noise, "Probability of a random solvable step");
  demos->add_option("-o,--out", demo_out, "Output file (stdout when absent)");

  std::string oracle_instance, oracle_method = "bfs";
  auto* oracle = app.add_subcommand("oracle", "Optimal plan for an instance");
  oracle->add_option("-i,--instance", oracle_instance, "Instance JSON file")->required();
  oracle->add_option("--method", oracle_method, "bfs | idastar | idastar-domain");

  std::vector<std::string> plot_inputs;
  std::string plot_out;
  auto* plot = app.add_subcommand("plotdata", "Merge results.json files into one long-format CSV");
  plot->add_option("inputs", plot_inputs, "results.json files")->required();
  plot->add_option("-o,--out", plot_out, "Output CSV (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen->parsed()) {
      const json doc = gen_args.document();
      Config cfg(doc);
      const fs::path dir = gen_args.output_dir(doc);
      fs::create_directories(dir);
      const int count = doc.contains("instances") ? doc["instances"].value("count", 10) : 10;
      json manifest{{"instances", json::array()}};
      char* hash = nullptr;
      check(ss_config_hash(cfg.handle, &hash));
      manifest["config_hash"] = take(hash);
      for (int i = 0; i < count; ++i) {
        ss_instance* inst = nullptr;
        check(ss_config_suite_instance(cfg.handle, i, &inst));
        char* text = nullptr;
        const ss_status st = ss_instance_to_json(inst, &text);
        ss_instance_free(inst);
        check(st);
        std::ostringstream name;
        name << "instance_" << std::setw(5) << std::setfill('0') << i << ".json";
        write_text(dir / name.str(), json::parse(take(text)).dump(2) + "\n");
        manifest["instances"].push_back(name.str());
      }
      write_text(dir / "manifest.json", manifest.dump(2) + "\n");
      std::cout << "wrote " << count << " instance(s) to " << dir.string() << "\n";
      return kExitOk;
    }
    if (solve->parsed()) {
      const json doc = solve_args.document();
      Config cfg(doc);
      ss_instance* inst = nullptr;
      check(ss_instance_from_json(read_text(instance_path).c_str(), &inst));
      Result r;
      const ss_status st = ss_solve(cfg.handle, inst, &r.handle);
      ss_instance_free(inst);
      check(st);
      const std::string text = r.json_text();
      if (solve_out.empty()) std::cout << text;
      else write_text(solve_out, text);
      return finish(r, "solve");
    }
    if (bench->parsed()) {
      const json doc = bench_args.document();
      Config cfg(doc);
      Result r;
      check(ss_bench(cfg.handle, &r.handle));
      const fs::path dir = bench_args.output_dir(doc);
      const std::string text = r.json_text();
      write_text(dir / "results.json", text);
      write_text(dir / "results.csv", r.csv());
      std::cout << json::parse(text)["aggregates"].dump() << "\n";
      return finish(r, "bench");
    }
    if (sweep->parsed()) {
      const json doc = sweep_args.document();
      Config cfg(doc);
      json eps = json::array();
      for (const auto& e : eps_list) {
        if (e == "to-zero") {
          eps.push_back(e);
        } else {
          try {
            eps.push_back(std::stod(e));
          } catch (const std::exception&) {
            fail(kExitConfig, "bad epsilon '" + e + "'");
          }
        }
      }
      Result r;
      check(ss_sweep_eps(cfg.handle, eps.dump().c_str(), baseline.empty() ? nullptr : baseline.c_str(), &r.handle));
      const fs::path dir = sweep_args.output_dir(doc);
      write_text(dir / "sweep.json", r.json_text());
      write_text(dir / "sweep.csv", r.csv());
      std::cout << r.csv();
      return finish(r, "sweep-eps");
    }
    if (ablate->parsed()) {
      const json doc = ablate_args.document();
      Config cfg(doc);
      Result r;
      const std::string kinds = json(evals).dump();
      check(ss_ablate_eval(cfg.handle, evals.empty() ? nullptr : kinds.c_str(), &r.handle));
      const fs::path dir = ablate_args.output_dir(doc);
      write_text(dir / "ablation.json", r.json_text());
      write_text(dir / "ablation.csv", r.csv());
      std::cout << r.csv();
      return finish(r, "ablate-eval");
    }
    if (bound->parsed()) {
      const json doc = bound_args.document();
      Config cfg(doc);
      Result r;
      check(ss_bound_check(cfg.handle, &r.handle));
      const fs::path dir = bound_args.output_dir(doc);
      const std::string text = r.json_text();
      write_text(dir / "bounds.json", text);
      std::cout << json::parse(text)["summary"].dump() << "\n";
      return finish(r, "bound-check");
    }
    if (demos->parsed()) {
      char* text = nullptr;
      check(ss_build_demos(demo_domain.c_str(), demo_params.c_str(), demo_count, demo_seed, demo_noise, &text));
      const std::string jsonl = take(text);
      if (demo_out.empty()) std::cout << jsonl;
      else write_text(demo_out, jsonl);
      return kExitOk;
    }
    if (oracle->parsed()) {
      ss_instance* inst = nullptr;
      check(ss_instance_from_json(read_text(oracle_instance).c_str(), &inst));
      char* text = nullptr;
      const ss_status st = ss_oracle_solve(inst, oracle_method.c_str(), &text);
      ss_instance_free(inst);
      check(st);
      std::cout << take(text) << "\n";
      return kExitOk;
    }
    if (plot->parsed()) {
      std::vector<std::string> docs;
      for (const auto& p : plot_inputs) docs.push_back(read_text(p));
      std::vector<const char*> ptrs;
      for (const auto& d : docs) ptrs.push_back(d.c_str());
      char* csv = nullptr;
      check(ss_plotdata(ptrs.data(), ptrs.size(), &csv));
      const std::string text = take(csv);
      if (plot_out.empty()) std::cout << text;
      else write_text(plot_out, text);
      return kExitOk;
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}
