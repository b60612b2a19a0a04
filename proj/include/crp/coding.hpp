#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crp/dist.hpp"
#include "crp/errors.hpp"

namespace crp {

// Prefix code over the ranges 1..m. Zero-probability symbols carry no
// codeword (length 0). Codewords are canonical: assigned in (length,
// range-index) order, so prefix-freeness follows from the Kraft inequality.
struct PrefixCode {
  int m = 0;
  std::vector<int> lengths;         // per range, 0 = uncoded
  std::vector<std::uint64_t> words; // valid where lengths[i] > 0

  bool coded(int range) const { return lengths[static_cast<std::size_t>(range - 1)] > 0; }
  int length(int range) const { return lengths[static_cast<std::size_t>(range - 1)]; }
  std::uint64_t word(int range) const { return words[static_cast<std::size_t>(range - 1)]; }
  double kraft_sum() const;
};

/// Shannon lengths ceil(log2(1/q_i)) with a floor of one bit, plus canonical
/// codewords. The floor only triggers for q_i > 1/2, so Kraft still holds.
PrefixCode shannon_lengths(const CondensedDistribution& q);

/// Sum of p_i * length_i. Throws AbsoluteContinuityError if p puts mass on an
/// uncoded symbol.
double expected_length(const PrefixCode& code, const CondensedDistribution& p);

// (first hitting step, signed offset) against a shared range-finding sequence.
struct TargetDistanceCodeword {
  std::size_t hit_step = 0;  // 1-based
  int offset = 0;            // target - sequence[hit_step]

  int bit_length(int radius) const;
};

/// First step r with |seq[r] - target| <= radius. Throws NotEncodableError.
TargetDistanceCodeword td_encode(std::span<const int> seq, int target, int radius);

/// seq[r] + offset. Throws MalformedCodewordError when r is out of bounds.
int td_decode(std::span<const int> seq, const TargetDistanceCodeword& cw);

}  // namespace crp
