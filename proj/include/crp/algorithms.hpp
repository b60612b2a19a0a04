#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "crp/channel.hpp"
#include "crp/dist.hpp"
#include "crp/rng.hpp"

namespace crp {

// No-CD uniform algorithm: one transmit probability per round.
struct UniformScheduleNoCD {
  std::vector<double> probs;
};

// Collision history as observed on a CD channel: 0 = silence, 1 = collision.
struct CollisionHistory {
  std::uint64_t bits = 0;
  int length = 0;

  void push(bool collision) {
    if (collision) bits |= std::uint64_t{1} << length;
    ++length;
  }
  bool bit(int i) const { return (bits >> i) & 1; }
};

// CD uniform algorithm: collision history -> transmit probability, defined
// for every history up to max_depth.
struct UniformScheduleCD {
  std::function<double(const CollisionHistory&)> rule;
  int max_depth = 0;
};

struct RunResult {
  bool solved = false;
  std::uint64_t rounds = 0;  // round of first success, or rounds used if unsolved
};

/// Decay probabilities 1/2, 1/4, ..., 2^-ceil(log2 n), repeated cyclically up
/// to `horizon` rounds (horizon 0 = a single pass).
UniformScheduleNoCD decay_schedule(std::uint64_t n, std::size_t horizon = 0);

/// Ranges of L(n) ordered most-likely-first under qY; ties broken by
/// ascending range index, zero-probability ranges last (ascending).
std::vector<int> entropy_order(const CondensedDistribution& qY);

/// One pass of ceil(log2 n) rounds: round i transmits with 2^-order[i].
UniformScheduleNoCD entropy_ordered_schedule(const CondensedDistribution& qY);

RunResult run_nocd(const UniformScheduleNoCD& schedule, std::uint64_t k, Rng& rng,
                   bool exact_counts = false);

/// Willard-style binary search over a sorted set of range indices with a CD
/// channel. Each pivot is probed `reps` times at probability 2^-median; any
/// collision sends the search toward larger ranges, otherwise smaller. Any
/// success ends everything.
RunResult willard_search(const std::vector<int>& ranges, std::uint64_t k, int reps,
                         Rng& rng, std::vector<int>* probe_trace = nullptr,
                         bool exact_counts = false);

/// Ranges grouped by Shannon code length under qY, in increasing length
/// order. Class indices are capped at ceil(log2 m) (an optimal code never
/// needs longer words than that); uncoded ranges form a final class.
std::vector<std::vector<int>> code_length_classes(const CondensedDistribution& qY);

/// CD algorithm: Willard search per code-length class, shortest class first.
RunResult cd_prediction_run(const CondensedDistribution& qY, std::uint64_t k, int reps,
                            Rng& rng, bool exact_counts = false);

}  // namespace crp
