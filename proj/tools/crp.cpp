// Command-line front end: simulate, sweep, code, rf-transform, verify-family,
// advice. Exit codes: 0 success, 1 usage error, 2 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "crp/advice.hpp"
#include "crp/algorithms.hpp"
#include "crp/coding.hpp"
#include "crp/dist.hpp"
#include "crp/harness.hpp"
#include "crp/rangefind.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;

void write_output(const std::string& path, const std::string& payload) {
  if (path.empty() || path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw crp::ConfigError("cannot open output file: " + path);
  out << payload;
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> values;
  if (csv.empty()) return values;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) values.push_back(std::stod(token));
  return values;
}

// Global flags; subcommands see them through fallthrough.
struct GlobalFlags {
  std::uint64_t seed = 0;
  int workers = 0;
  std::string out;
  CLI::App* app = nullptr;

  void attach(CLI::App* a) {
    app = a;
    a->add_option("--seed", seed, "master seed")->configurable(false);
    a->add_option("--workers", workers, "worker threads (0 = all)")->configurable(false);
    a->add_option("--out", out, "output path (default stdout)")->configurable(false);
  }
  bool given(const std::string& name) const { return app->count(name) > 0; }
};

// Simulation options shared by `simulate` and `sweep`. A config file supplies
// key=value defaults; flags given on the command line override it.
struct SimulateFlags {
  CLI::App* cmd = nullptr;
  std::string config_path;
  std::string mode = "nocd";
  std::string algo = "decay";
  crp::ExperimentConfig flags;

  void attach(CLI::App* sub) {
    cmd = sub;
    cmd->add_option("--config", config_path, "key=value config file, overridden by flags");
    cmd->add_option("--mode", mode, "channel model: nocd or cd");
    cmd->add_option("--algo", algo, "decay|entropy|willard|cd-pred|rand-nocd|rand-cd");
    cmd->add_option("--n", flags.n, "maximum network size");
    cmd->add_option("--true-file", flags.true_src,
                    "true size distribution (file or point:k|uniform|geometric:r|dyadic:h)");
    cmd->add_option("--pred-file", flags.pred_src, "predicted size distribution");
    cmd->add_option("--b", flags.b, "advice bits for rand-nocd / rand-cd");
    cmd->add_option("--trials", flags.trials, "Monte Carlo trials");
    cmd->add_option("--horizon", flags.horizon, "round budget (0 = default)");
    cmd->add_option("--reps", flags.reps, "Willard probe repetitions");
  }

  crp::ExperimentConfig resolve(const GlobalFlags& global) const {
    crp::ExperimentConfig cfg;
    if (!config_path.empty())
      for (const auto& [k, v] : crp::parse_config_file(config_path))
        crp::apply_config_entry(cfg, k, v);
    const auto given = [&](const std::string& name) {
      return cmd->count(name) > 0;
    };
    if (given("--mode") || config_path.empty())
      cfg.mode = mode == "cd" ? crp::ChannelModel::cd : crp::ChannelModel::no_cd;
    if (given("--algo") || config_path.empty()) cfg.algo = crp::algo_from_name(algo);
    if (given("--n")) cfg.n = flags.n;
    if (given("--true-file")) cfg.true_src = flags.true_src;
    if (given("--pred-file")) cfg.pred_src = flags.pred_src;
    if (given("--b")) cfg.b = flags.b;
    if (given("--trials")) cfg.trials = flags.trials;
    if (given("--horizon")) cfg.horizon = flags.horizon;
    if (given("--reps")) cfg.reps = flags.reps;
    if (global.given("--seed")) cfg.seed = global.seed;
    if (global.given("--workers")) cfg.workers = global.workers;
    if (global.given("--out")) cfg.out = global.out;
    return cfg;
  }
};

int cmd_code(const std::string& p_src, const std::string& q_src, std::uint64_t n) {
  const crp::CondensedDistribution p = condense(crp::resolve_distribution(p_src, n));
  const crp::CondensedDistribution q = condense(crp::resolve_distribution(q_src, n));
  const crp::PrefixCode code = crp::shannon_lengths(q);
  std::printf("range,q,length,codeword\n");
  for (int r = 1; r <= q.m(); ++r) {
    if (code.coded(r)) {
      std::string word;
      for (int bit = code.length(r) - 1; bit >= 0; --bit)
        word += ((code.word(r) >> bit) & 1) ? '1' : '0';
      std::printf("%d,%.10g,%d,%s\n", r, q[r], code.length(r), word.c_str());
    } else {
      std::printf("%d,%.10g,,\n", r, q[r]);
    }
  }
  const double h = crp::entropy(p);
  const double d = crp::kl_divergence(p, q);
  const double e = crp::expected_length(code, p);
  std::printf("# H(p)=%.10g D_KL(p||q)=%.10g E(S)=%.10g\n", h, d, e);
  return kExitOk;
}

int cmd_rf_transform(const std::string& schedule_path, std::uint64_t n, int alpha,
                     const std::string& out_path) {
  std::ifstream in(schedule_path);
  if (!in) throw crp::ConfigError("cannot open schedule file: " + schedule_path);
  crp::UniformScheduleNoCD schedule;
  double p;
  while (in >> p) schedule.probs.push_back(p);
  const crp::RangeFindingSequence seq = crp::rf_construct(schedule, n);
  const int m = crp::range_count(n);
  int llg = 0;
  while ((1 << llg) < m) ++llg;
  const int radius = alpha * llg;

  std::string out = "# sequence:";
  for (int v : seq.values) out += " " + std::to_string(v);
  out += "\nrange,solve_step\n";
  for (int target = 1; target <= m; ++target) {
    const auto step = crp::solve_sequence(seq, target, radius);
    out += std::to_string(target) + "," + (step ? std::to_string(*step) : "") + "\n";
  }
  write_output(out_path, out);
  return kExitOk;
}

int cmd_verify_family(const std::string& family_path, int n, int k, int limit) {
  std::ifstream in(family_path);
  if (!in) throw crp::ConfigError("cannot open family file: " + family_path);
  const crp::SetFamily family = crp::load_family(in, n);
  const crp::SelectivityResult result = crp::is_strongly_selective(family, n, k, limit);
  if (result.selective) {
    std::printf("strongly selective: yes (n=%d, k=%d, %zu sets)\n", n, k,
                family.masks.size());
    return kExitOk;
  }
  std::string members;
  for (int i = 0; i < n; ++i)
    if ((result.witness_set >> i) & 1) members += (members.empty() ? "" : ",") + std::to_string(i);
  std::printf("strongly selective: no  witness Z={%s} z=%d\n", members.c_str(),
              result.witness_element);
  return kExitVerification;
}

int cmd_advice(const std::string& scheme, std::uint64_t n, int b, bool exhaustive,
               std::size_t trials, std::uint64_t seed, int reps, std::size_t horizon,
               const std::string& out_path) {
  std::string out = "# schema: crp-advice-v1\nset,rounds,solved\n";
  bool ok = true;
  if (scheme == "det-nocd" || scheme == "det-cd") {
    auto run_one = [&](const crp::ParticipantSet& p) {
      return scheme == "det-nocd" ? crp::det_nocd_scheme(n, b).run(p)
                                  : crp::det_cd_scheme(n, b).run(p);
    };
    if (exhaustive) {
      if (n > 20) throw crp::InfeasibleError("exhaustive enumeration limited to n <= 20");
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        const auto r = run_one(crp::ParticipantSet::from_mask(mask));
        char buf[64];
        std::snprintf(buf, sizeof buf, "%llx,%llu,1\n",
                      static_cast<unsigned long long>(mask),
                      static_cast<unsigned long long>(r.rounds));
        out += buf;
        ok = ok && ((mask >> r.transmitter) & 1);
      }
    } else {
      crp::Rng rng(seed);
      for (std::size_t t = 0; t < trials; ++t) {
        std::vector<std::uint32_t> ids;
        for (std::uint64_t id = 0; id < n; ++id)
          if (rng.bernoulli(0.5)) ids.push_back(static_cast<std::uint32_t>(id));
        if (ids.empty()) ids.push_back(static_cast<std::uint32_t>(rng.below(n)));
        const auto r = run_one(crp::ParticipantSet(std::move(ids)));
        out += std::to_string(t) + "," + std::to_string(r.rounds) + ",1\n";
      }
    }
  } else if (scheme == "rand-nocd" || scheme == "rand-cd") {
    const std::size_t budget = horizon == 0 ? 64ULL * crp::range_count(n) : horizon;
    for (std::size_t t = 0; t < trials; ++t) {
      crp::Rng rng(crp::derive_seed(seed, t));
      const std::uint64_t k = 2 + rng.below(n - 1);
      const crp::RunResult r =
          scheme == "rand-nocd"
              ? crp::rand_nocd_scheme(n, b).run(k, rng, budget)
              : crp::rand_cd_scheme(n, b).run(k, reps, rng, budget);
      out += std::to_string(t) + "," + std::to_string(r.rounds) + "," +
             (r.solved ? "1" : "0") + "\n";
    }
  } else {
    throw crp::ConfigError("unknown scheme: " + scheme);
  }
  write_output(out_path, out);
  return ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contention resolution with predictions and advice"};
  app.require_subcommand(1);
  app.fallthrough(true);

  GlobalFlags global;
  global.attach(&app);

  SimulateFlags sim;
  CLI::App* simulate = app.add_subcommand("simulate", "run one experiment, emit CSV");
  sim.attach(simulate);

  SimulateFlags sweep_flags;
  std::string sweep_param = "b";
  std::string sweep_values;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run one experiment per parameter value");
  sweep_flags.attach(sweep_cmd);
  sweep_cmd->add_option("--param", sweep_param, "b|n|entropy-target|divergence-target");
  sweep_cmd->add_option("--values", sweep_values, "comma-separated values");

  std::string code_p, code_q;
  std::uint64_t code_n = 0;
  CLI::App* code_cmd = app.add_subcommand("code", "print the prefix-code table for (p, q)");
  code_cmd->add_option("--p-file", code_p, "actual distribution")->required();
  code_cmd->add_option("--q-file", code_q, "prediction the code is built for")->required();
  code_cmd->add_option("--n", code_n, "maximum network size")->required();

  std::string rf_schedule;
  std::uint64_t rf_n = 0;
  int rf_alpha = 1;
  CLI::App* rf_cmd = app.add_subcommand("rf-transform",
                                        "schedule file -> range-finding sequence CSV");
  rf_cmd->add_option("--schedule", rf_schedule, "one probability per line")->required();
  rf_cmd->add_option("--n", rf_n, "maximum network size")->required();
  rf_cmd->add_option("--alpha", rf_alpha, "radius multiplier");

  std::string vf_family;
  int vf_n = 0, vf_k = 0, vf_limit = 20;
  CLI::App* vf_cmd = app.add_subcommand("verify-family",
                                        "check a set family for strong selectivity");
  vf_cmd->add_option("--family", vf_family, "one subset per line, comma-separated ids")
      ->required();
  vf_cmd->add_option("--n", vf_n, "universe size")->required();
  vf_cmd->add_option("--k", vf_k, "selectivity parameter")->required();
  vf_cmd->add_option("--limit", vf_limit, "exhaustive enumeration cap");

  std::string adv_scheme;
  std::uint64_t adv_n = 0;
  int adv_b = 0, adv_reps = 3;
  std::size_t adv_trials = 1000, adv_horizon = 0;
  bool adv_exhaustive = false;
  CLI::App* adv_cmd = app.add_subcommand("advice", "evaluate a perfect-advice scheme");
  adv_cmd->add_option("--scheme", adv_scheme, "det-nocd|det-cd|rand-nocd|rand-cd")
      ->required();
  adv_cmd->add_option("--n", adv_n, "number of potential participants")->required();
  adv_cmd->add_option("--b", adv_b, "advice bits")->required();
  adv_cmd->add_flag("--exhaustive", adv_exhaustive, "enumerate every participant set");
  adv_cmd->add_option("--trials", adv_trials, "random participant sets / size draws");
  adv_cmd->add_option("--reps", adv_reps, "Willard probe repetitions");
  adv_cmd->add_option("--horizon", adv_horizon, "round budget for randomized schemes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      const crp::ExperimentConfig cfg = sim.resolve(global);
      const crp::ResultTable table = crp::run_experiment(cfg);
      write_output(cfg.out, crp::to_csv(table));
      return kExitOk;
    }
    if (sweep_cmd->parsed()) {
      const crp::ExperimentConfig cfg = sweep_flags.resolve(global);
      const crp::SweepParam param = crp::sweep_param_from_name(sweep_param);
      const auto results = crp::sweep(cfg, param, parse_values(sweep_values));
      write_output(cfg.out, crp::sweep_to_csv(param, results));
      return kExitOk;
    }
    if (code_cmd->parsed()) return cmd_code(code_p, code_q, code_n);
    if (rf_cmd->parsed()) return cmd_rf_transform(rf_schedule, rf_n, rf_alpha, global.out);
    if (vf_cmd->parsed()) return cmd_verify_family(vf_family, vf_n, vf_k, vf_limit);
    if (adv_cmd->parsed())
      return cmd_advice(adv_scheme, adv_n, adv_b, adv_exhaustive, adv_trials, global.seed,
                        adv_reps, adv_horizon, global.out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
