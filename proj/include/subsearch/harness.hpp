#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subsearch/bounds.hpp"
#include "subsearch/generators.hpp"
#include "subsearch/search.hpp"

namespace subsearch {

// Where demonstrations come from: a JSONL file, or built in memory.
struct DemoSource {
  std::string path;
  int count = -1;  // -1 = the suite's instance count
  std::optional<std::uint64_t> base_seed;  // default: the suite's base seed
  double noise = 0.0;
};

struct RunConfig {
  DomainId domain = DomainId::Stp;
  json params = json::object();
  int count = 10;
  std::uint64_t base_seed = 1;
  GeneratorConfig generator;
  MixedPolicy policy;  // without the demo table; resolved per suite
  EvalKind eval = EvalKind::PhsStarScaled;
  std::vector<std::uint64_t> max_expansions{50, 100, 200};  // ascending
  double wall_clock_seconds = kPosInf;
  std::size_t max_memory_mb = 2048;
  bool dedup = true;
  bool instrument = false;
  std::optional<DemoSource> demos;
  std::string witness = "instance";  // bound checks: "instance" or "oracle"
  std::string output_dir;
  int parallelism = 1;

  std::uint64_t max_budget() const { return max_expansions.back(); }
};

RunConfig config_from_json(const json& j);
// Canonical form; `output` and `parallelism` are left out of the hash.
json to_json(const RunConfig& c);
std::string config_hash(const RunConfig& c);

std::uint64_t instance_seed(const RunConfig& c, int index);
Instance suite_instance(const RunConfig& c, int index);

struct SuiteResources {
  std::shared_ptr<const SegmentIndex> segments;
  std::shared_ptr<const DemoTable> table;
};

SuiteResources load_resources(const RunConfig& c);

ChildExpander make_expander(const RunConfig& c, const Instance& instance, std::shared_ptr<const Domain> domain,
                            const SuiteResources& res);
SearchBudget make_budget(const RunConfig& c);

struct RunRow {
  int index = 0;
  std::uint64_t instance_seed = 0;
  bool failed = false;
  std::string error;
  SearchResult result;
};

json to_json(const RunRow& r, bool include_wall_clock = true);

struct ResultsTable {
  std::string config_hash;
  json config;
  std::vector<std::uint64_t> budgets;
  std::vector<RunRow> rows;

  bool solved_at(const RunRow& r, std::uint64_t n) const {
    return !r.failed && r.result.solved && r.result.expansions <= n;
  }
  double success_rate(std::uint64_t n) const;
  std::size_t failures() const;
  bool any_out_of_memory() const;
  double mean_ll_share_expansions() const;
  json aggregates() const;
  // results.json body; `digest` covers everything but wall-clock fields.
  json to_json(bool include_wall_clock = true) const;
  std::string digest() const;
  // Long format: one line per (run, budget).
  std::string to_csv(const std::string& label = "") const;
};

inline const char* kResultsCsvHeader =
    "config_hash,label,instance_index,instance_seed,budget,solved_at_budget,status,expansions,"
    "generated,dist,ll_share_solution,ll_share_expansions,peak_memory_bytes";

// Runs every suite instance once at the largest budget.
ResultsTable run_bench(const RunConfig& c);
SearchOutcome solve_instance(const RunConfig& c, const Instance& instance, const SuiteResources& res);

// Epsilon sweep against a baseline (pure subgoal mode unless overridden).
struct SweepEntry {
  std::string label;
  ResultsTable table;
};
struct SweepResult {
  SweepEntry baseline;
  std::vector<SweepEntry> entries;
  json to_json() const;
  std::string to_csv() const;
};
// `eps` holds numbers or the string "to-zero"; `baseline` patches the policy
// section of the baseline config.
SweepResult sweep_epsilon(const RunConfig& c, const json& eps, const json& baseline = nullptr);
double unsolved_ratio(const ResultsTable& t, const ResultsTable& base, std::uint64_t n);

struct AblationResult {
  std::vector<std::pair<EvalKind, ResultsTable>> cells;
  json to_json() const;
  std::string to_csv() const;
};
AblationResult ablate_eval(const RunConfig& c, const std::vector<EvalKind>& kinds);

struct BoundSuite {
  std::string config_hash;
  std::vector<BoundReport> reports;
  std::vector<std::string> errors;
  json to_json() const;
};
// General fringe bound plus both witness bounds for one instrumented run.
BoundReport bound_report(const RunConfig& c, const Instance& inst, const ChildExpander& expander,
                         const SearchOutcome& outcome);
// Forces duplicate detection off and instrumentation on.
BoundSuite bound_check(const RunConfig& c);

// Merges results.json documents into one long-format CSV; all must share one
// config hash.
std::string plotdata(const std::vector<json>& results);

void write_file(const std::string& path, const std::string& text);
std::string read_file(const std::string& path);

}  // namespace subsearch
