#pragma once

#include <cstdint>

#include "crp/rng.hpp"

namespace crp {

// In no-CD mode observers cannot tell Silence from Collision; a Success is
// globally observable in both modes and terminates the execution.
enum class ChannelModel { no_cd, cd };

enum class Outcome { silence, success, collision };

struct RoundOutcome {
  Outcome tag = Outcome::silence;
  // Exact for silence/success and in counted mode. The aggregate sampler
  // reports 2 for collisions: uniform algorithms only observe the tag.
  std::uint64_t transmitters = 0;
};

/// One synchronous round: k participants each transmit with probability p.
/// O(1) regardless of k; draws a single uniform and classifies it against the
/// exact silence/success probabilities.
RoundOutcome run_round(std::uint64_t k, double p, Rng& rng);

/// Per-participant variant: k Bernoulli draws, exact transmitter count.
RoundOutcome run_round_counted(std::uint64_t k, double p, Rng& rng);

/// Probability exactly one of k participants transmits: k * p * (1-p)^(k-1).
double exact_success_prob(std::uint64_t k, double p);

}  // namespace crp
