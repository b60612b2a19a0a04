#include "crp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "crp/advice.hpp"
#include "crp/algorithms.hpp"
#include "crp/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace crp {

Algo algo_from_name(const std::string& name) {
  if (name == "decay") return Algo::decay;
  if (name == "entropy") return Algo::entropy;
  if (name == "willard") return Algo::willard;
  if (name == "cd-pred") return Algo::cd_pred;
  if (name == "rand-nocd") return Algo::rand_nocd;
  if (name == "rand-cd") return Algo::rand_cd;
  throw ConfigError("unknown algorithm: " + name);
}

const char* algo_name(Algo algo) {
  switch (algo) {
    case Algo::decay: return "decay";
    case Algo::entropy: return "entropy";
    case Algo::willard: return "willard";
    case Algo::cd_pred: return "cd-pred";
    case Algo::rand_nocd: return "rand-nocd";
    case Algo::rand_cd: return "rand-cd";
  }
  return "?";
}

namespace {

bool algo_uses_cd(Algo algo) {
  return algo == Algo::willard || algo == Algo::cd_pred || algo == Algo::rand_cd;
}

bool algo_uses_prediction(Algo algo) {
  return algo == Algo::entropy || algo == Algo::cd_pred;
}

bool algo_uses_advice(Algo algo) {
  return algo == Algo::rand_nocd || algo == Algo::rand_cd;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n < 2) throw ConfigError("n must be at least 2");
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (reps < 1) throw ConfigError("reps must be at least 1");
  if (true_src.empty()) throw ConfigError("true distribution source required");
  if (algo_uses_prediction(algo) && pred_src.empty() && !pred_override)
    throw ConfigError("prediction source required for this algorithm");
  if (algo_uses_advice(algo) && b < 0)
    throw ConfigError("advice bits required for this algorithm");
  if (algo_uses_cd(algo) != (mode == ChannelModel::cd))
    throw ConfigError("algorithm does not match channel mode");
}

namespace {

struct Prepared {
  SizeDistribution truth;
  std::optional<CondensedDistribution> pred;
  UniformScheduleNoCD schedule;          // decay / entropy
  std::vector<int> all_ranges;           // willard
  std::optional<RandNocdScheme> rnocd;
  std::optional<RandCdScheme> rcd;
  std::size_t horizon = 0;
};

Prepared prepare(const ExperimentConfig& cfg) {
  cfg.validate();
  Prepared prep{resolve_distribution(cfg.true_src, cfg.n), {}, {}, {}, {}, {}, 0};
  const int m = range_count(cfg.n);
  prep.horizon = cfg.horizon != 0 ? cfg.horizon
                                  : static_cast<std::size_t>(64) * static_cast<std::size_t>(m);
  if (algo_uses_prediction(cfg.algo)) {
    prep.pred = cfg.pred_override
                    ? *cfg.pred_override
                    : condense(resolve_distribution(cfg.pred_src, cfg.n));
    if (prep.pred->m() != m) throw ConfigError("prediction range count mismatch");
  }
  switch (cfg.algo) {
    case Algo::decay:
      prep.schedule = decay_schedule(cfg.n, prep.horizon);
      break;
    case Algo::entropy:
      prep.schedule = entropy_ordered_schedule(*prep.pred);  // one pass
      break;
    case Algo::willard:
      for (int r = 1; r <= m; ++r) prep.all_ranges.push_back(r);
      break;
    case Algo::cd_pred:
      break;
    case Algo::rand_nocd:
      prep.rnocd = rand_nocd_scheme(cfg.n, cfg.b);
      break;
    case Algo::rand_cd:
      prep.rcd = rand_cd_scheme(cfg.n, cfg.b);
      break;
  }
  return prep;
}

TrialRow run_one(const ExperimentConfig& cfg, const Prepared& prep, std::uint64_t trial) {
  Rng rng(derive_seed(cfg.seed, trial));
  const std::uint64_t k = sample_size(prep.truth, rng);
  RunResult r{};
  switch (cfg.algo) {
    case Algo::decay:
    case Algo::entropy:
      r = run_nocd(prep.schedule, k, rng, cfg.exact_counts);
      break;
    case Algo::willard:
      r = willard_search(prep.all_ranges, k, cfg.reps, rng, nullptr, cfg.exact_counts);
      break;
    case Algo::cd_pred:
      r = cd_prediction_run(*prep.pred, k, cfg.reps, rng, cfg.exact_counts);
      break;
    case Algo::rand_nocd:
      r = prep.rnocd->run(k, rng, prep.horizon, cfg.exact_counts);
      break;
    case Algo::rand_cd:
      r = prep.rcd->run(k, cfg.reps, rng, prep.horizon, cfg.exact_counts);
      break;
  }
  return {trial, k, r.solved, r.rounds};
}

}  // namespace

bool operator==(const TrialRow& a, const TrialRow& b) {
  return a.trial == b.trial && a.k == b.k && a.solved == b.solved && a.rounds == b.rounds;
}

Aggregates compute_aggregates(const std::vector<TrialRow>& rows) {
  Aggregates agg;
  agg.trials = rows.size();
  double sum = 0.0;
  std::vector<std::uint64_t> rounds;
  rounds.reserve(rows.size());
  for (const TrialRow& row : rows) {
    if (row.solved) ++agg.solved;
    sum += static_cast<double>(row.rounds);
    rounds.push_back(row.rounds);
  }
  const RateCi ci = wilson_interval(agg.solved, agg.trials);
  agg.solve_rate = ci.rate;
  agg.wilson_half = ci.half;
  agg.mean_rounds = sum / static_cast<double>(rows.size());
  std::sort(rounds.begin(), rounds.end());
  const std::size_t mid = rounds.size() / 2;
  agg.median_rounds = rounds.size() % 2 == 1
                          ? static_cast<double>(rounds[mid])
                          : 0.5 * static_cast<double>(rounds[mid - 1] + rounds[mid]);
  return agg;
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
  const Prepared prep = prepare(cfg);
  ResultTable table;
  table.rows.resize(cfg.trials);
#ifdef _OPENMP
  const int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(cfg.trials); ++t)
    table.rows[static_cast<std::size_t>(t)] =
        run_one(cfg, prep, static_cast<std::uint64_t>(t));
  table.agg = compute_aggregates(table.rows);
  return table;
}

ResultTable run_experiment_serial(const ExperimentConfig& cfg) {
  const Prepared prep = prepare(cfg);
  ResultTable table;
  table.rows.reserve(cfg.trials);
  for (std::uint64_t t = 0; t < cfg.trials; ++t)
    table.rows.push_back(run_one(cfg, prep, t));
  table.agg = compute_aggregates(table.rows);
  return table;
}

RateCi wilson_interval(std::size_t successes, std::size_t trials) {
  RateCi ci;
  if (trials == 0) return ci;
  const double z = 1.959963984540054;  // 95%
  const double nn = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (phat + z2 / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
  ci.rate = phat;
  ci.half = half;
  ci.lo = center - half;
  ci.hi = center + half;
  return ci;
}

RateCi success_within(const ResultTable& table, std::uint64_t budget) {
  std::size_t hits = 0;
  for (const TrialRow& row : table.rows)
    if (row.solved && row.rounds <= budget) ++hits;
  return wilson_interval(hits, table.rows.size());
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string to_csv(const ResultTable& table) {
  std::string out;
  out += "# schema: ";
  out += kResultsSchema;
  out += "\ntrial,k,solved,rounds\n";
  for (const TrialRow& row : table.rows) {
    out += std::to_string(row.trial);
    out += ',';
    out += std::to_string(row.k);
    out += ',';
    out += row.solved ? '1' : '0';
    out += ',';
    out += std::to_string(row.rounds);
    out += '\n';
  }
  const Aggregates& a = table.agg;
  out += "# trials=" + std::to_string(a.trials) + " solved=" + std::to_string(a.solved) +
         " rate=" + format_double(a.solve_rate) +
         " wilson_half=" + format_double(a.wilson_half) +
         " mean_rounds=" + format_double(a.mean_rounds) +
         " median_rounds=" + format_double(a.median_rounds) + "\n";
  return out;
}

SweepParam sweep_param_from_name(const std::string& name) {
  if (name == "b") return SweepParam::b;
  if (name == "n") return SweepParam::n;
  if (name == "entropy-target") return SweepParam::entropy_target;
  if (name == "divergence-target") return SweepParam::divergence_target;
  throw ConfigError("unknown sweep parameter: " + name);
}

const char* sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::b: return "b";
    case SweepParam::n: return "n";
    case SweepParam::entropy_target: return "entropy-target";
    case SweepParam::divergence_target: return "divergence-target";
  }
  return "?";
}

std::vector<std::pair<double, ResultTable>> sweep(const ExperimentConfig& cfg,
                                                  SweepParam param,
                                                  const std::vector<double>& values) {
  std::vector<std::pair<double, ResultTable>> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ExperimentConfig run = cfg;
    run.seed = derive_seed(cfg.seed, i);
    const double v = values[i];
    switch (param) {
      case SweepParam::b:
        run.b = static_cast<int>(v);
        break;
      case SweepParam::n:
        run.n = static_cast<std::uint64_t>(v);
        break;
      case SweepParam::entropy_target: {
        const std::string spec = "dyadic:" + std::to_string(static_cast<int>(v));
        run.true_src = spec;
        run.pred_src = spec;
        break;
      }
      case SweepParam::divergence_target: {
        const CondensedDistribution truth = condense(resolve_distribution(run.true_src, run.n));
        run.pred_override = perturb_to_divergence(truth, v);
        break;
      }
    }
    out.push_back({v, run_experiment(run)});
  }
  return out;
}

std::string sweep_to_csv(SweepParam param,
                         const std::vector<std::pair<double, ResultTable>>& results) {
  std::string out;
  out += "# schema: ";
  out += kSweepSchema;
  out += "\nparam,value,trial,k,solved,rounds\n";
  for (const auto& [value, table] : results) {
    for (const TrialRow& row : table.rows) {
      out += sweep_param_name(param);
      out += ',';
      out += format_double(value);
      out += ',';
      out += std::to_string(row.trial);
      out += ',';
      out += std::to_string(row.k);
      out += ',';
      out += row.solved ? '1' : '0';
      out += ',';
      out += std::to_string(row.rounds);
      out += '\n';
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_config_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line missing '=': " + line);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    entries.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
  }
  return entries;
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "mode")
    cfg.mode = value == "cd" ? ChannelModel::cd : ChannelModel::no_cd;
  else if (key == "algo")
    cfg.algo = algo_from_name(value);
  else if (key == "n")
    cfg.n = std::stoull(value);
  else if (key == "true-file")
    cfg.true_src = value;
  else if (key == "pred-file")
    cfg.pred_src = value;
  else if (key == "b")
    cfg.b = std::stoi(value);
  else if (key == "trials")
    cfg.trials = std::stoull(value);
  else if (key == "seed")
    cfg.seed = std::stoull(value);
  else if (key == "horizon")
    cfg.horizon = std::stoull(value);
  else if (key == "reps")
    cfg.reps = std::stoi(value);
  else if (key == "workers")
    cfg.workers = std::stoi(value);
  else if (key == "exact-counts")
    cfg.exact_counts = value == "1" || value == "true";
  else if (key == "out")
    cfg.out = value;
  else
    throw ConfigError("unknown config key: " + key);
}

}  // namespace crp
