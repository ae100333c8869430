#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "subsearch/domain.hpp"
#include "subsearch/oracle.hpp"
#include "subsearch/policy.hpp"

namespace subsearch {

struct SubgoalProposal {
  int proposal_id = 0;
  State target;
  std::vector<Action> actions;
  bool valid = false;
};

enum class GeneratorKind { Null, Macro, GreedyRollout, DemoSegment, Adversarial };
enum class AdversarialMode { FirstActionWrong, AwayFromGoal };

struct GeneratorConfig {
  GeneratorKind kind = GeneratorKind::Null;
  int horizon = 8;        // H
  int max_proposals = 4;  // K
  std::vector<std::vector<Action>> catalog;  // Macro
  std::vector<int> lengths;                  // GreedyRollout; empty = {H/4, H/2, H}
  int lookahead = 100;                       // GreedyRollout node cap per length; 0 = single rollout
  double coverage = 1.0;                     // DemoSegment rho
  std::uint64_t mask_seed = 0;               // DemoSegment key masking
  AdversarialMode mode = AdversarialMode::FirstActionWrong;

  void validate() const;
};

GeneratorKind parse_generator_kind(std::string_view name);
std::string_view to_string(GeneratorKind k);
GeneratorConfig generator_config_from_json(const json& j);
json to_json(const GeneratorConfig& c);

// One recorded solution of a generated instance.
struct DemoTrajectory {
  DomainId domain = DomainId::Stp;
  std::uint64_t seed = 0;
  json params = json::object();
  std::vector<Action> actions;
};

struct DemoDataset {
  std::vector<DemoTrajectory> trajectories;
};

json to_json(const DemoTrajectory& t);
DemoTrajectory demo_from_json(const json& j);
std::string to_jsonl(const DemoDataset& d);
DemoDataset dataset_from_jsonl(std::string_view text);

// Instances are generated with seed derive_seed(base_seed, i), the same scheme
// the harness uses, so a dataset covers the suite built from the same base.
// Each step follows an oracle-optimal action; with probability `noise` it is
// replaced by a random legal action that keeps the instance solvable.
DemoDataset build_demo_dataset(DomainId domain, const json& params, int n_instances,
                               std::uint64_t base_seed, double noise);

// Demo segments keyed by (instance fingerprint, state). Segments start every H
// steps along each trajectory.
class SegmentIndex {
 public:
  struct Segment {
    std::vector<Action> actions;
    State end;
  };

  static SegmentIndex build(const DemoDataset& dataset, int horizon);

  const std::vector<Segment>* find(std::uint64_t instance_fp, const State& s) const;
  std::size_t size() const { return map_.size(); }
  // Action counts along the demonstrations, for the demo-table policy.
  std::shared_ptr<const DemoTable> table() const { return table_; }

 private:
  std::unordered_map<std::uint64_t, std::vector<Segment>> map_;
  std::shared_ptr<DemoTable> table_ = std::make_shared<DemoTable>();
};

// A generator bound to one instance. Concrete generators return raw
// candidates; `propose` validates and deduplicates them.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual std::vector<SubgoalProposal> candidates(const State& s, std::uint64_t seed) const = 0;
  int max_proposals() const { return config_.max_proposals; }
  int horizon() const { return config_.horizon; }
  const GeneratorConfig& config() const { return config_; }

 protected:
  Generator(GeneratorConfig config, std::shared_ptr<const Domain> domain)
      : config_(std::move(config)), domain_(std::move(domain)) {}

  GeneratorConfig config_;
  std::shared_ptr<const Domain> domain_;
};

struct GeneratorResources {
  std::shared_ptr<const SegmentIndex> segments;
};

std::shared_ptr<const Generator> make_generator(const GeneratorConfig& config, const Instance& instance,
                                                std::shared_ptr<const Domain> domain,
                                                const GeneratorResources& resources = {});

// True when the demo-segment generator keeps the index key at `key_hash`.
bool segment_key_kept(std::uint64_t key_hash, std::uint64_t mask_seed, double coverage);

// Replays candidates, drops invalid or empty ones, keeps the shortest sequence
// per target and caps the result at K. Proposal ids are renumbered 0..n-1.
std::vector<SubgoalProposal> propose(const Generator& gen, const Domain& domain, const State& s,
                                     std::uint64_t seed);

}  // namespace subsearch
