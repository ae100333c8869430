#include "subsearch/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <new>
#include <sstream>
#include <thread>

#include "subsearch/oracle.hpp"

namespace subsearch {

namespace {

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

json num_json(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return nullptr;
  return x > 0 ? "inf" : "-inf";
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw Error(ErrorCode::Config, std::string(where) + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      throw Error(ErrorCode::Config, std::string("unknown key '") + k + "' in " + where);
    }
  }
}

LowLevelPolicy low_from_json(const json& j) {
  LowLevelPolicy p;
  if (j.is_null()) return p;
  check_keys(j, {"kind", "temperature"}, "policy.low");
  p.kind = parse_low_policy(j.value("kind", std::string("uniform")));
  p.temperature = j.value("temperature", 1.0);
  return p;
}

HighLevelPolicy high_from_json(const json& j) {
  HighLevelPolicy p;
  if (j.is_null()) return p;
  check_keys(j, {"kind", "temperature"}, "policy.high");
  p.kind = parse_high_policy(j.value("kind", std::string("uniform")));
  p.temperature = j.value("temperature", 1.0);
  return p;
}

void apply_epsilon(MixedPolicy& p, const json& e) {
  if (e.is_string()) {
    if (e.get<std::string>() != "to-zero") throw Error(ErrorCode::Config, "epsilon must be a number or \"to-zero\"");
    p.to_zero = true;
    p.epsilon = 0.0;
  } else if (e.is_number()) {
    p.to_zero = false;
    p.epsilon = e.get<double>();
  } else {
    throw Error(ErrorCode::Config, "epsilon must be a number or \"to-zero\"");
  }
}

json epsilon_json(const MixedPolicy& p) { return p.to_zero ? json("to-zero") : json(p.epsilon); }

}  // namespace

RunConfig config_from_json(const json& j) {
  RunConfig c;
  try {
    check_keys(j, {"domain", "params", "instances", "generator", "policy", "eval", "budget", "flags", "demos",
                   "witness", "output", "parallelism"},
               "config");
    c.domain = parse_domain(j.value("domain", std::string("stp")));
    c.params = j.value("params", json::object());
    if (!c.params.is_object()) throw Error(ErrorCode::Config, "params must be an object");
    if (j.contains("instances")) {
      const auto& in = j.at("instances");
      check_keys(in, {"count", "base_seed"}, "instances");
      c.count = in.value("count", c.count);
      c.base_seed = in.value("base_seed", c.base_seed);
    }
    if (c.count < 0) throw Error(ErrorCode::Config, "instance count must be non-negative");
    c.generator = generator_config_from_json(j.value("generator", json(nullptr)));
    if (j.contains("policy")) {
      const auto& p = j.at("policy");
      check_keys(p, {"epsilon", "low", "high"}, "policy");
      if (p.contains("epsilon")) apply_epsilon(c.policy, p.at("epsilon"));
      c.policy.low = low_from_json(p.value("low", json(nullptr)));
      c.policy.high = high_from_json(p.value("high", json(nullptr)));
    }
    c.eval = parse_eval_kind(j.value("eval", std::string("phs-star-scaled")));
    if (j.contains("budget")) {
      const auto& b = j.at("budget");
      check_keys(b, {"max_expansions", "wall_clock_seconds", "max_memory_mb"}, "budget");
      if (b.contains("max_expansions")) {
        const auto& m = b.at("max_expansions");
        c.max_expansions = m.is_array() ? m.get<std::vector<std::uint64_t>>()
                                        : std::vector<std::uint64_t>{m.get<std::uint64_t>()};
      }
      if (b.contains("wall_clock_seconds") && !b.at("wall_clock_seconds").is_null()) {
        const auto& w = b.at("wall_clock_seconds");
        c.wall_clock_seconds = w.is_string() && w.get<std::string>() == "inf" ? kPosInf : w.get<double>();
      }
      c.max_memory_mb = b.value("max_memory_mb", c.max_memory_mb);
    }
    std::sort(c.max_expansions.begin(), c.max_expansions.end());
    c.max_expansions.erase(std::unique(c.max_expansions.begin(), c.max_expansions.end()), c.max_expansions.end());
    if (c.max_expansions.empty()) throw Error(ErrorCode::Config, "budget.max_expansions must not be empty");
    if (!(c.wall_clock_seconds > 0.0)) throw Error(ErrorCode::Config, "wall_clock_seconds must be positive");
    if (j.contains("flags")) {
      const auto& f = j.at("flags");
      check_keys(f, {"dedup", "instrument", "low_level"}, "flags");
      c.dedup = f.value("dedup", c.dedup);
      c.instrument = f.value("instrument", c.instrument);
      c.policy.include_low_level = f.value("low_level", true);
    }
    if (j.contains("demos") && !j.at("demos").is_null()) {
      const auto& d = j.at("demos");
      check_keys(d, {"path", "count", "base_seed", "noise"}, "demos");
      DemoSource src;
      src.path = d.value("path", std::string());
      src.count = d.value("count", -1);
      if (d.contains("base_seed")) src.base_seed = d.at("base_seed").get<std::uint64_t>();
      src.noise = d.value("noise", 0.0);
      c.demos = src;
    }
    c.witness = j.value("witness", c.witness);
    if (c.witness != "instance" && c.witness != "oracle") {
      throw Error(ErrorCode::Config, "witness must be \"instance\" or \"oracle\"");
    }
    c.output_dir = j.value("output", std::string());
    c.parallelism = j.value("parallelism", 1);
    if (c.parallelism < 1) throw Error(ErrorCode::Config, "parallelism must be >= 1");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) throw Error(ErrorCode::Config, e.what());
    throw;
  }
  MixedPolicy check = c.policy;
  if (check.low.kind == LowPolicyKind::DemoTable) check.low.table = std::make_shared<DemoTable>();
  check.validate();
  if (c.count > 0) {
    try {
      generate_instance(c.domain, c.params, c.base_seed);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParamsOutOfRange) throw Error(ErrorCode::Config, e.what());
      throw;
    }
  }
  return c;
}

json to_json(const RunConfig& c) {
  json j{{"domain", to_string(c.domain)},
         {"params", c.params},
         {"instances", {{"count", c.count}, {"base_seed", c.base_seed}}},
         {"generator", to_json(c.generator)},
         {"policy",
          {{"epsilon", epsilon_json(c.policy)},
           {"low", {{"kind", to_string(c.policy.low.kind)}, {"temperature", c.policy.low.temperature}}},
           {"high", {{"kind", to_string(c.policy.high.kind)}, {"temperature", c.policy.high.temperature}}}}},
         {"eval", to_string(c.eval)},
         {"budget",
          {{"max_expansions", c.max_expansions},
           {"wall_clock_seconds", num_json(c.wall_clock_seconds)},
           {"max_memory_mb", c.max_memory_mb}}},
         {"flags", {{"dedup", c.dedup}, {"instrument", c.instrument}, {"low_level", c.policy.include_low_level}}},
         {"witness", c.witness}};
  if (c.demos) {
    json d{{"path", c.demos->path}, {"count", c.demos->count}, {"noise", c.demos->noise}};
    if (c.demos->base_seed) d["base_seed"] = *c.demos->base_seed;
    j["demos"] = d;
  }
  return j;
}

std::string config_hash(const RunConfig& c) { return hex64(fnv1a64(to_json(c).dump())); }

std::uint64_t instance_seed(const RunConfig& c, int index) {
  return derive_seed(c.base_seed, static_cast<std::uint64_t>(index));
}

Instance suite_instance(const RunConfig& c, int index) {
  return generate_instance(c.domain, c.params, instance_seed(c, index));
}

SuiteResources load_resources(const RunConfig& c) {
  SuiteResources res;
  const bool need = c.generator.kind == GeneratorKind::DemoSegment || c.policy.low.kind == LowPolicyKind::DemoTable;
  if (!need) return res;
  DemoSource src = c.demos.value_or(DemoSource{});
  DemoDataset data;
  if (!src.path.empty()) {
    data = dataset_from_jsonl(read_file(src.path));
  } else {
    data = build_demo_dataset(c.domain, c.params, src.count < 0 ? c.count : src.count,
                              src.base_seed.value_or(c.base_seed), src.noise);
  }
  auto index = std::make_shared<SegmentIndex>(SegmentIndex::build(data, c.generator.horizon));
  res.table = index->table();
  res.segments = std::move(index);
  return res;
}

ChildExpander make_expander(const RunConfig& c, const Instance& instance, std::shared_ptr<const Domain> domain,
                            const SuiteResources& res) {
  ChildExpander e;
  e.domain = domain;
  if (c.generator.kind != GeneratorKind::Null) {
    e.generator = make_generator(c.generator, instance, domain, GeneratorResources{res.segments});
  }
  e.policy = c.policy;
  if (e.policy.low.kind == LowPolicyKind::DemoTable) e.policy.low.table = res.table;
  e.seed = derive_seed(instance.seed, 0x5ea4c);
  e.instance_fp = instance.fingerprint();
  e.need_h = uses_heuristic(c.eval) || c.policy.low.kind == LowPolicyKind::BoltzmannHeuristic ||
             c.policy.high.kind == HighPolicyKind::BoltzmannProgress;
  return e;
}

SearchBudget make_budget(const RunConfig& c) {
  SearchBudget b;
  b.max_expansions = c.max_budget();
  b.wall_clock_seconds = c.wall_clock_seconds;
  b.max_memory_bytes = c.max_memory_mb * (std::size_t{1} << 20);
  return b;
}

SearchOutcome solve_instance(const RunConfig& c, const Instance& instance, const SuiteResources& res) {
  const auto dom = make_domain(instance);
  const auto expander = make_expander(c, instance, dom, res);
  return search(instance, expander, c.eval, make_budget(c), SearchOptions{c.dedup, c.instrument});
}

json to_json(const RunRow& r, bool include_wall_clock) {
  json j{{"instance_index", r.index}, {"instance_seed", r.instance_seed}};
  if (r.failed) {
    j["failed"] = true;
    j["error"] = r.error;
    return j;
  }
  const auto& s = r.result;
  j["solved"] = s.solved;
  j["status"] = to_string(s.status);
  j["expansions"] = s.expansions;
  j["generated"] = s.generated;
  j["dist"] = s.dist();
  j["g"] = s.solution_g;
  j["ll_share_solution"] = s.ll_share_solution();
  j["ll_share_expansions"] = s.ll_share_expansions();
  j["peak_memory_bytes"] = s.peak_memory_bytes;
  if (include_wall_clock) j["wall_clock"] = s.wall_clock;
  return j;
}

double ResultsTable::success_rate(std::uint64_t n) const {
  if (rows.empty()) return 1.0;
  std::size_t k = 0;
  for (const auto& r : rows) k += solved_at(r, n) ? 1 : 0;
  return static_cast<double>(k) / static_cast<double>(rows.size());
}

std::size_t ResultsTable::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const RunRow& r) { return r.failed; }));
}

bool ResultsTable::any_out_of_memory() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const RunRow& r) { return !r.failed && r.result.status == SearchStatus::OutOfMemory; });
}

double ResultsTable::mean_ll_share_expansions() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : rows) {
    if (r.failed) continue;
    sum += r.result.ll_share_expansions();
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

json ResultsTable::aggregates() const {
  json success = json::object(), mean = json::object(), stderr_ = json::object();
  for (auto n : budgets) {
    const std::string key = std::to_string(n);
    success[key] = success_rate(n);
    std::vector<double> xs;
    for (const auto& r : rows) {
      if (solved_at(r, n)) xs.push_back(static_cast<double>(r.result.expansions));
    }
    double m = 0.0, se = 0.0;
    if (!xs.empty()) {
      for (double x : xs) m += x;
      m /= static_cast<double>(xs.size());
      if (xs.size() > 1) {
        double v = 0.0;
        for (double x : xs) v += (x - m) * (x - m);
        v /= static_cast<double>(xs.size() - 1);
        se = std::sqrt(v / static_cast<double>(xs.size()));
      }
    }
    mean[key] = xs.empty() ? json(nullptr) : json(m);
    stderr_[key] = xs.empty() ? json(nullptr) : json(se);
  }
  double sol_share = 0.0;
  std::size_t solved = 0, oom = 0;
  for (const auto& r : rows) {
    if (r.failed) continue;
    if (r.result.status == SearchStatus::OutOfMemory) ++oom;
    if (r.result.solved) {
      sol_share += r.result.ll_share_solution();
      ++solved;
    }
  }
  return json{{"count", rows.size()},
              {"failures", failures()},
              {"out_of_memory", oom},
              {"success_rate_at", success},
              {"mean_expansions_solved", mean},
              {"stderr_expansions_solved", stderr_},
              {"mean_ll_share_expansions", mean_ll_share_expansions()},
              {"mean_ll_share_solution", solved ? json(sol_share / static_cast<double>(solved)) : json(nullptr)}};
}

json ResultsTable::to_json(bool include_wall_clock) const {
  json rows_json = json::array();
  for (const auto& r : rows) rows_json.push_back(subsearch::to_json(r, include_wall_clock));
  json j{{"config_hash", config_hash}, {"config", config}, {"budgets", budgets}, {"rows", rows_json},
         {"aggregates", aggregates()}};
  if (include_wall_clock) j["digest"] = digest();
  return j;
}

std::string ResultsTable::digest() const { return hex64(fnv1a64(to_json(false).dump())); }

namespace {

std::string csv_lines(const std::string& hash, const std::string& label, const json& budgets, const json& rows) {
  std::string out;
  for (const auto& r : rows) {
    for (const auto& b : budgets) {
      const auto n = b.get<std::uint64_t>();
      std::ostringstream line;
      line << hash << ',' << label << ',' << r.at("instance_index").get<int>() << ','
           << r.at("instance_seed").get<std::uint64_t>() << ',' << n << ',';
      if (r.value("failed", false)) {
        line << "0,failed,,,,,,";
      } else {
        const bool ok = r.at("solved").get<bool>() && r.at("expansions").get<std::uint64_t>() <= n;
        line << (ok ? 1 : 0) << ',' << r.at("status").get<std::string>() << ','
             << r.at("expansions").get<std::uint64_t>() << ',' << r.at("generated").get<std::uint64_t>() << ','
             << r.at("dist").get<int>() << ',' << num(r.at("ll_share_solution").get<double>()) << ','
             << num(r.at("ll_share_expansions").get<double>()) << ','
             << r.at("peak_memory_bytes").get<std::uint64_t>();
      }
      out += line.str();
      out += '\n';
    }
  }
  return out;
}

}  // namespace

std::string ResultsTable::to_csv(const std::string& label) const {
  const json j = to_json(false);
  return std::string(kResultsCsvHeader) + "\n" + csv_lines(config_hash, label, j.at("budgets"), j.at("rows"));
}

ResultsTable run_bench(const RunConfig& c) {
  ResultsTable t;
  t.config_hash = config_hash(c);
  t.config = to_json(c);
  t.budgets = c.max_expansions;
  t.rows.resize(static_cast<std::size_t>(c.count));
  const SuiteResources res = load_resources(c);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < c.count; i = next++) {
      RunRow& row = t.rows[static_cast<std::size_t>(i)];
      row.index = i;
      row.instance_seed = instance_seed(c, i);
      try {
        const Instance inst = generate_instance(c.domain, c.params, row.instance_seed);
        row.result = solve_instance(c, inst, res).result;
      } catch (const Error& e) {
        row.failed = true;
        row.error = std::string(to_string(e.code())) + ": " + e.what();
      } catch (const std::bad_alloc&) {
        row.result = SearchResult{};
        row.result.status = SearchStatus::OutOfMemory;
      }
    }
  };
  const int threads = std::max(1, std::min(c.parallelism, c.count));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::stable_sort(t.rows.begin(), t.rows.end(),
                   [](const RunRow& a, const RunRow& b) { return a.instance_seed < b.instance_seed; });
  return t;
}

double unsolved_ratio(const ResultsTable& t, const ResultsTable& base, std::uint64_t n) {
  auto unsolved = [n](const ResultsTable& x) {
    std::size_t k = 0;
    for (const auto& r : x.rows) k += x.solved_at(r, n) ? 0 : 1;
    return k;
  };
  const auto a = unsolved(t), b = unsolved(base);
  if (b == 0) return a == 0 ? 1.0 : kPosInf;
  return static_cast<double>(a) / static_cast<double>(b);
}

namespace {

std::string epsilon_label(const MixedPolicy& p) {
  if (!p.include_low_level) return "subgoal-only";
  if (p.to_zero) return "eps=to-zero";
  return "eps=" + num(p.epsilon);
}

}  // namespace

SweepResult sweep_epsilon(const RunConfig& c, const json& eps, const json& baseline) {
  if (!eps.is_array() || eps.empty()) throw Error(ErrorCode::Config, "epsilon list must be a non-empty array");
  RunConfig base = c;
  base.policy.include_low_level = false;
  if (baseline.is_object()) {
    check_keys(baseline, {"epsilon", "low_level"}, "baseline");
    if (baseline.contains("epsilon")) apply_epsilon(base.policy, baseline.at("epsilon"));
    base.policy.include_low_level = baseline.value("low_level", false);
  } else if (!baseline.is_null()) {
    throw Error(ErrorCode::Config, "baseline must be an object");
  }
  base.policy.validate();
  SweepResult out;
  out.baseline = {epsilon_label(base.policy), run_bench(base)};
  for (const auto& e : eps) {
    RunConfig rc = c;
    rc.policy.include_low_level = true;
    apply_epsilon(rc.policy, e);
    MixedPolicy check = rc.policy;
    if (check.low.kind == LowPolicyKind::DemoTable) check.low.table = std::make_shared<DemoTable>();
    check.validate();
    out.entries.push_back({epsilon_label(rc.policy), run_bench(rc)});
  }
  return out;
}

json SweepResult::to_json() const {
  auto entry_json = [&](const SweepEntry& e) {
    json ratio = json::object();
    for (auto n : e.table.budgets) ratio[std::to_string(n)] = num_json(unsolved_ratio(e.table, baseline.table, n));
    return json{{"label", e.label}, {"config_hash", e.table.config_hash}, {"aggregates", e.table.aggregates()},
                {"unsolved_ratio", ratio}, {"digest", e.table.digest()}};
  };
  json entries = json::array();
  for (const auto& e : this->entries) entries.push_back(entry_json(e));
  return json{{"baseline", entry_json(baseline)}, {"entries", entries}};
}

std::string SweepResult::to_csv() const {
  std::string out = "label,budget,success_rate,unsolved_ratio,mean_ll_share_expansions,mean_ll_share_solution\n";
  auto add = [&](const SweepEntry& e) {
    const json agg = e.table.aggregates();
    for (auto n : e.table.budgets) {
      const auto& sol = agg.at("mean_ll_share_solution");
      out += e.label + ',' + std::to_string(n) + ',' + num(e.table.success_rate(n)) + ',' +
             num(unsolved_ratio(e.table, baseline.table, n)) + ',' + num(e.table.mean_ll_share_expansions()) + ',' +
             (sol.is_null() ? std::string() : num(sol.get<double>())) + '\n';
    }
  };
  add(baseline);
  for (const auto& e : entries) add(e);
  return out;
}

AblationResult ablate_eval(const RunConfig& c, const std::vector<EvalKind>& kinds) {
  if (kinds.empty()) throw Error(ErrorCode::Config, "ablation needs at least one evaluation function");
  AblationResult out;
  for (EvalKind k : kinds) {
    RunConfig rc = c;
    rc.eval = k;
    out.cells.emplace_back(k, run_bench(rc));
  }
  return out;
}

json AblationResult::to_json() const {
  json rows = json::array();
  for (const auto& [kind, table] : cells) {
    json success = json::object();
    const bool na = table.any_out_of_memory();
    for (auto n : table.budgets) success[std::to_string(n)] = na ? json("N/A") : json(table.success_rate(n));
    json statuses = json::object();
    for (const auto& r : table.rows) {
      const std::string key = r.failed ? "error" : std::string(to_string(r.result.status));
      statuses[key] = statuses.value(key, 0) + 1;
    }
    rows.push_back({{"eval", to_string(kind)}, {"config_hash", table.config_hash}, {"success_rate_at", success},
                    {"out_of_memory", na}, {"statuses", statuses}, {"digest", table.digest()}});
  }
  return json{{"cells", rows}};
}

std::string AblationResult::to_csv() const {
  std::string out = "eval,budget,success_rate\n";
  for (const auto& [kind, table] : cells) {
    const bool na = table.any_out_of_memory();
    for (auto n : table.budgets) {
      out += std::string(to_string(kind)) + ',' + std::to_string(n) + ',' + (na ? "N/A" : num(table.success_rate(n))) +
             '\n';
    }
  }
  return out;
}

BoundReport bound_report(const RunConfig& c, const Instance& inst, const ChildExpander& expander,
                         const SearchOutcome& outcome) {
  std::vector<Action> witness = inst.witness;
  if (c.witness == "oracle") {
    auto o = oracle::bfs_solve(*expander.domain, expander.domain->initial_state());
    if (!o) throw Error(ErrorCode::InvalidWitness, "oracle found no solution");
    witness = o->plan;
  }
  BoundReport r = check_witness_path_bound(outcome, expander, c.eval, witness);
  const BoundReport general = check_general_bound(outcome, c.eval);
  if (!r.unbounded) {
    r.log_bound_general = general.log_bound_general;
    r.holds_general = general.holds_general;
  }
  r.dedup = c.dedup;
  return r;
}

BoundSuite bound_check(const RunConfig& config) {
  RunConfig c = config;
  c.dedup = false;
  c.instrument = true;
  BoundSuite out;
  out.config_hash = config_hash(c);
  out.reports.resize(static_cast<std::size_t>(c.count));
  out.errors.resize(static_cast<std::size_t>(c.count));
  const SuiteResources res = load_resources(c);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < c.count; i = next++) {
      try {
        const Instance inst = suite_instance(c, i);
        const auto dom = make_domain(inst);
        const auto expander = make_expander(c, inst, dom, res);
        const auto outcome = search(inst, expander, c.eval, make_budget(c), SearchOptions{false, true});
        BoundReport r = bound_report(c, inst, expander, outcome);
        out.reports[static_cast<std::size_t>(i)] = std::move(r);
      } catch (const Error& e) {
        out.errors[static_cast<std::size_t>(i)] = std::string(to_string(e.code())) + ": " + e.what();
      }
    }
  };
  const int threads = std::max(1, std::min(c.parallelism, c.count));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

json BoundSuite::to_json() const {
  json reports_json = json::array();
  std::size_t ok = 0, general = 0, path = 0, witness = 0, mass = 0, approx = 0, failed = 0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (!errors[i].empty()) {
      reports_json.push_back({{"instance_index", i}, {"error", errors[i]}});
      ++failed;
      continue;
    }
    const auto& r = reports[i];
    json j = subsearch::to_json(r);
    j["instance_index"] = i;
    reports_json.push_back(j);
    ++ok;
    general += r.holds_general;
    path += r.holds_witness_path;
    witness += r.holds_witness;
    approx += r.witness_path_approximate;
    mass += r.log_fringe_mass <= std::log1p(kBoundSlack);
  }
  return json{{"config_hash", config_hash},
              {"dedup", false},
              {"reports", reports_json},
              {"summary",
               {{"runs", ok},
                {"failures", failed},
                {"holds_general", general},
                {"holds_witness_path", path},
                {"witness_path_approximate", approx},
                {"holds_witness", witness},
                {"fringe_mass_at_most_one", mass}}}};
}

std::string plotdata(const std::vector<json>& results) {
  std::string out = std::string(kResultsCsvHeader) + "\n";
  std::string hash;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& doc = results[i];
    if (!doc.is_object() || !doc.contains("config_hash") || !doc.contains("rows") || !doc.contains("budgets")) {
      throw Error(ErrorCode::Io, "input is not a results.json document");
    }
    const auto h = doc.at("config_hash").get<std::string>();
    if (i == 0) hash = h;
    if (h != hash) throw Error(ErrorCode::MixedConfigHash, "results come from different configs (" + hash + " vs " + h + ")");
    out += csv_lines(h, "", doc.at("budgets"), doc.at("rows"));
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path);
  f << text;
  if (!f) throw Error(ErrorCode::Io, "failed writing " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace subsearch
