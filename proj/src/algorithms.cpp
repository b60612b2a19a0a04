#include "crp/algorithms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "crp/coding.hpp"
#include "crp/errors.hpp"

namespace crp {

UniformScheduleNoCD decay_schedule(std::uint64_t n, std::size_t horizon) {
  const int m = range_count(n);
  const std::size_t len = horizon == 0 ? static_cast<std::size_t>(m) : horizon;
  UniformScheduleNoCD s;
  s.probs.reserve(len);
  for (std::size_t i = 0; i < len; ++i)
    s.probs.push_back(std::exp2(-static_cast<double>(i % static_cast<std::size_t>(m) + 1)));
  return s;
}

std::vector<int> entropy_order(const CondensedDistribution& qY) {
  std::vector<int> order(static_cast<std::size_t>(qY.m()));
  for (int i = 0; i < qY.m(); ++i) order[static_cast<std::size_t>(i)] = i + 1;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double qa = qY[a], qb = qY[b];
    if (qa != qb) return qa > qb;
    return a < b;
  });
  return order;
}

UniformScheduleNoCD entropy_ordered_schedule(const CondensedDistribution& qY) {
  UniformScheduleNoCD s;
  for (int range : entropy_order(qY)) s.probs.push_back(std::exp2(-range));
  return s;
}

RunResult run_nocd(const UniformScheduleNoCD& schedule, std::uint64_t k, Rng& rng,
                   bool exact_counts) {
  if (k < 2) throw ConfigError("contention needs at least two participants");
  std::uint64_t round = 0;
  for (double p : schedule.probs) {
    ++round;
    const RoundOutcome out =
        exact_counts ? run_round_counted(k, p, rng) : run_round(k, p, rng);
    if (out.tag == Outcome::success) return {true, round};
  }
  return {false, round};
}

RunResult willard_search(const std::vector<int>& ranges, std::uint64_t k, int reps,
                         Rng& rng, std::vector<int>* probe_trace, bool exact_counts) {
  if (ranges.empty()) throw ConfigError("willard_search needs a nonempty range set");
  if (reps < 1) throw ConfigError("willard_search needs reps >= 1");
  if (!std::is_sorted(ranges.begin(), ranges.end()))
    throw ConfigError("willard_search needs ascending ranges");
  std::uint64_t rounds = 0;
  std::size_t lo = 0, hi = ranges.size();  // active candidates [lo, hi)
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo - 1) / 2;  // lower median
    const int pivot = ranges[mid];
    if (probe_trace) probe_trace->push_back(pivot);
    const double p = std::exp2(-pivot);
    bool collided = false;
    for (int r = 0; r < reps; ++r) {
      ++rounds;
      const RoundOutcome out =
          exact_counts ? run_round_counted(k, p, rng) : run_round(k, p, rng);
      if (out.tag == Outcome::success) return {true, rounds};
      if (out.tag == Outcome::collision) collided = true;
    }
    // Collision is unforgeable evidence of >= 2 transmitters: guess too small.
    if (collided)
      lo = mid + 1;
    else
      hi = mid;
  }
  return {false, rounds};
}

std::vector<std::vector<int>> code_length_classes(const CondensedDistribution& qY) {
  const PrefixCode code = shannon_lengths(qY);
  const int cap = std::max(1, static_cast<int>(std::bit_width(
                                  static_cast<unsigned>(qY.m()) - 1U)));
  std::vector<std::vector<int>> classes(static_cast<std::size_t>(cap) + 1);
  for (int range = 1; range <= qY.m(); ++range) {
    if (code.coded(range)) {
      const int cls = std::min(code.length(range), cap);
      classes[static_cast<std::size_t>(cls - 1)].push_back(range);
    } else {
      classes.back().push_back(range);  // impossible under the prediction
    }
  }
  std::erase_if(classes, [](const std::vector<int>& c) { return c.empty(); });
  return classes;
}

RunResult cd_prediction_run(const CondensedDistribution& qY, std::uint64_t k, int reps,
                            Rng& rng, bool exact_counts) {
  std::uint64_t rounds = 0;
  for (const auto& cls : code_length_classes(qY)) {
    const RunResult phase = willard_search(cls, k, reps, rng, nullptr, exact_counts);
    rounds += phase.rounds;
    if (phase.solved) return {true, rounds};
  }
  return {false, rounds};
}

}  // namespace crp
