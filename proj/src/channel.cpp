#include "crp/channel.hpp"

#include <cmath>

#include "crp/errors.hpp"

namespace crp {

namespace {

Outcome classify(std::uint64_t count) {
  if (count == 0) return Outcome::silence;
  if (count == 1) return Outcome::success;
  return Outcome::collision;
}

}  // namespace

RoundOutcome run_round(std::uint64_t k, double p, Rng& rng) {
  if (k < 1) throw ConfigError("run_round requires at least one participant");
  if (p < 0.0 || p > 1.0) throw ConfigError("transmit probability outside [0, 1]");
  if (p == 1.0) {
    return {classify(k), k};
  }
  const double log1m = std::log1p(-p);
  const double p_silence = std::exp(static_cast<double>(k) * log1m);
  const double p_success =
      static_cast<double>(k) * p * std::exp(static_cast<double>(k - 1) * log1m);
  const double u = rng.uniform01();
  if (u < p_silence) return {Outcome::silence, 0};
  if (u < p_silence + p_success) return {Outcome::success, 1};
  return {Outcome::collision, 2};
}

RoundOutcome run_round_counted(std::uint64_t k, double p, Rng& rng) {
  if (k < 1) throw ConfigError("run_round requires at least one participant");
  if (p < 0.0 || p > 1.0) throw ConfigError("transmit probability outside [0, 1]");
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < k; ++i)
    if (rng.bernoulli(p)) ++count;
  return {classify(count), count};
}

double exact_success_prob(std::uint64_t k, double p) {
  if (k < 1) throw ConfigError("need at least one participant");
  if (p < 0.0 || p > 1.0) throw ConfigError("transmit probability outside [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return k == 1 ? 1.0 : 0.0;
  return static_cast<double>(k) * p *
         std::exp(static_cast<double>(k - 1) * std::log1p(-p));
}

}  // namespace crp
