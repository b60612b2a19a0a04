#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crp/channel.hpp"
#include "crp/dist.hpp"

namespace crp {

inline constexpr const char* kResultsSchema = "crp-results-v1";
inline constexpr const char* kSweepSchema = "crp-sweep-v1";

enum class Algo { decay, entropy, willard, cd_pred, rand_nocd, rand_cd };

Algo algo_from_name(const std::string& name);
const char* algo_name(Algo algo);

struct ExperimentConfig {
  ChannelModel mode = ChannelModel::no_cd;
  Algo algo = Algo::decay;
  std::uint64_t n = 0;
  std::string true_src;  // file path or generator spec
  std::string pred_src;  // prediction source, where the algorithm uses one
  std::optional<CondensedDistribution> pred_override;  // used by divergence sweeps
  int b = -1;            // advice bits for rand_nocd / rand_cd
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t horizon = 0;  // 0 = per-algorithm default
  int reps = 3;
  int workers = 0;  // 0 = all hardware threads
  bool exact_counts = false;
  std::string out;

  void validate() const;
};

struct TrialRow {
  std::uint64_t trial = 0;
  std::uint64_t k = 0;
  bool solved = false;
  std::uint64_t rounds = 0;
};

struct Aggregates {
  std::size_t trials = 0;
  std::size_t solved = 0;
  double solve_rate = 0.0;
  double wilson_half = 0.0;
  double mean_rounds = 0.0;
  double median_rounds = 0.0;
};

struct ResultTable {
  std::vector<TrialRow> rows;
  Aggregates agg;
};

bool operator==(const TrialRow&, const TrialRow&);

/// Runs cfg.trials independent trials. Each trial derives its own generator
/// from (seed, trial index), so the result is identical for any worker count.
ResultTable run_experiment(const ExperimentConfig& cfg);

/// Plain-loop reference implementation; must match run_experiment exactly.
ResultTable run_experiment_serial(const ExperimentConfig& cfg);

struct RateCi {
  double rate = 0.0;
  double half = 0.0;  // Wilson 95% half-width
  double lo = 0.0;
  double hi = 0.0;
};

/// Fraction of trials solved within `budget` rounds, with Wilson 95% interval.
RateCi success_within(const ResultTable& table, std::uint64_t budget);

RateCi wilson_interval(std::size_t successes, std::size_t trials);

Aggregates compute_aggregates(const std::vector<TrialRow>& rows);

std::string to_csv(const ResultTable& table);

enum class SweepParam { b, n, entropy_target, divergence_target };
SweepParam sweep_param_from_name(const std::string& name);
const char* sweep_param_name(SweepParam p);

/// One experiment per value; run i uses seed derive_seed(cfg.seed, i).
std::vector<std::pair<double, ResultTable>> sweep(const ExperimentConfig& cfg,
                                                  SweepParam param,
                                                  const std::vector<double>& values);

std::string sweep_to_csv(SweepParam param,
                         const std::vector<std::pair<double, ResultTable>>& results);

/// key=value lines; blank lines and #-comments ignored.
std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

}  // namespace crp
