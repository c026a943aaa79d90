#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cqaoa/fit.hpp"
#include "cqaoa/tuner.hpp"

namespace cqaoa {

struct ExperimentConfig {
  int schema_version = 1;
  std::vector<ProblemKind> kinds = {ProblemKind::DensestSubgraph};
  std::vector<int> ns = {4, 6, 8, 10, 12};
  std::string k_rule = "half";  // "half" (k = n/2) or a fixed integer as text
  double edge_probability = 0.5;
  int instances_per_n = 40;
  bool exhaustive_n4 = false;  // all 64 four-vertex graphs at n = 4
  std::vector<VariantSpec> variants = {
      {MixerKind::Clique, SeparatorKind::Objective},
      {MixerKind::Grover, SeparatorKind::Threshold}};
  std::vector<double> targets = {0.99, 0.95};
  int p_cap = 0;  // 0: ceil(4*sqrt(dim)) per instance
  AngleStrategy angle_strategy = AngleStrategy::ExtrapolatedGd;
  TunerConfig tuner;
  std::uint64_t master_seed = 1;
  std::string out_dir = "results";
  int jobs = 0;  // 0: hardware concurrency

  int k_for(int n) const;
  int p_cap_for(std::size_t dim) const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

/// FNV-1a 64 over the canonical JSON dump; hex string.
std::string config_hash(const ExperimentConfig& c);

std::string format_target(double target);

struct ExperimentRecord {
  int n = 0;
  int k = 0;
  ProblemKind kind = ProblemKind::DensestSubgraph;
  std::uint64_t seed = 0;
  std::vector<std::pair<int, int>> edges;  // self-contained graph copy
  std::string variant;
  std::vector<TunedRound> rounds;
  std::map<std::string, int> rounds_to_target;  // formatted target -> p, -1 = cap exceeded
  std::vector<double> wall_ms;  // per tuned round; excluded from identity

  std::string key() const;  // (n, k, kind, seed, variant)
  ProblemInstance instance() const;
};

void to_json(nlohmann::json& j, const ExperimentRecord& r);
void from_json(const nlohmann::json& j, ExperimentRecord& r);

/// Tune rounds incrementally (inductively reusing round p-1) until every
/// target ratio is reached or the p cap is hit.
ExperimentRecord rounds_to_target(const ProblemInstance& instance,
                                  const VariantSpec& variant,
                                  AngleStrategy strategy,
                                  const std::vector<double>& targets,
                                  const TunerConfig& tuner_config, int p_cap);

struct EnsembleStat {
  int n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample (n-1) standard deviation
  int count = 0;
};

/// Per-n mean/stddev of rounds_to_target for one variant and target.
/// Cap-exceeded records are excluded; needs >= 2 usable records per n.
std::vector<EnsembleStat> ensemble_stats(
    const std::vector<ExperimentRecord>& records, const std::string& variant,
    double target);

/// Mean approximation ratio per round, tuned out to p_max: result[variant][p].
std::map<std::string, std::vector<double>> round_by_round_table(
    const std::vector<ProblemInstance>& instances,
    const std::vector<VariantSpec>& variants, int p_max, AngleStrategy strategy,
    const TunerConfig& tuner_config);

/// The instance ensemble a config describes, in deterministic order.
std::vector<ProblemInstance> config_instances(const ExperimentConfig& config,
                                              ProblemKind kind, int n);

std::vector<ExperimentRecord> read_records_jsonl(const std::string& path);
void write_records_jsonl(const std::string& path,
                         const std::vector<ExperimentRecord>& records,
                         const std::string& hash, std::uint64_t master_seed);

/// Full orchestration: runs all (instance, variant) pairs not already present
/// in out_dir/records.jsonl, then rewrites records (sorted), summary.csv and
/// manifest.json. Returns all records.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config);

}  // namespace cqaoa
