// Compares the OpenMP trial kernel against the serial reference on the two
// hot paths: Monte Carlo experiment trials and exhaustive advice enumeration.

#include <chrono>
#include <cstdio>

#include "crp/advice.hpp"
#include "crp/harness.hpp"

namespace {

double seconds(std::chrono::steady_clock::time_point a,
               std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <typename F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return seconds(t0, t1);
}

}  // namespace

int main() {
  std::printf("%-34s %10s %10s %8s\n", "workload", "serial[s]", "parallel[s]", "speedup");

  {
    crp::ExperimentConfig cfg;
    cfg.mode = crp::ChannelModel::no_cd;
    cfg.algo = crp::Algo::entropy;
    cfg.n = 1 << 16;
    cfg.true_src = "dyadic:4";
    cfg.pred_src = "dyadic:4";
    cfg.trials = 400000;
    cfg.seed = 1;
    crp::ResultTable serial, parallel;
    const double ts = timed([&] { serial = crp::run_experiment_serial(cfg); });
    const double tp = timed([&] { parallel = crp::run_experiment(cfg); });
    const bool same = serial.rows == parallel.rows;
    std::printf("%-34s %10.3f %10.3f %7.2fx %s\n", "entropy schedule, 400k trials", ts,
                tp, ts / tp, same ? "" : "MISMATCH");
  }
  {
    crp::ExperimentConfig cfg;
    cfg.mode = crp::ChannelModel::cd;
    cfg.algo = crp::Algo::cd_pred;
    cfg.n = 1 << 16;
    cfg.true_src = "uniform";
    cfg.pred_src = "dyadic:4";
    cfg.trials = 200000;
    cfg.seed = 2;
    crp::ResultTable serial, parallel;
    const double ts = timed([&] { serial = crp::run_experiment_serial(cfg); });
    const double tp = timed([&] { parallel = crp::run_experiment(cfg); });
    const bool same = serial.rows == parallel.rows;
    std::printf("%-34s %10.3f %10.3f %7.2fx %s\n", "cd prediction, 200k trials", ts, tp,
                ts / tp, same ? "" : "MISMATCH");
  }
  {
    crp::ExhaustiveReport serial, parallel;
    const double ts = timed([&] { serial = crp::exhaustive_det_cd_serial(20, 2); });
    const double tp = timed([&] { parallel = crp::exhaustive_det_cd(20, 2); });
    const bool same = serial.max_rounds == parallel.max_rounds &&
                      serial.worst_mask == parallel.worst_mask;
    std::printf("%-34s %10.3f %10.3f %7.2fx %s\n", "exhaustive det-cd, n=20", ts, tp,
                ts / tp, same ? "" : "MISMATCH");
  }
  return 0;
}
