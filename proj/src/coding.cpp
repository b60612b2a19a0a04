#include "crp/coding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace crp {

namespace {

int ceil_log2_reciprocal(double q) {
  // ceil(log2(1/q)) computed so that exact powers of two land exactly.
  const double raw = -std::log2(q);
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) < 1e-9) return static_cast<int>(rounded);
  return static_cast<int>(std::ceil(raw));
}

}  // namespace

double PrefixCode::kraft_sum() const {
  double s = 0.0;
  for (int len : lengths)
    if (len > 0) s += std::exp2(-len);
  return s;
}

PrefixCode shannon_lengths(const CondensedDistribution& q) {
  PrefixCode code;
  code.m = q.m();
  code.lengths.assign(static_cast<std::size_t>(code.m), 0);
  code.words.assign(static_cast<std::size_t>(code.m), 0);
  for (int i = 0; i < code.m; ++i) {
    const double qi = q.q()[static_cast<std::size_t>(i)];
    if (qi > 0.0)
      code.lengths[static_cast<std::size_t>(i)] = std::max(1, ceil_log2_reciprocal(qi));
  }
  // Canonical assignment in (length, range) order.
  std::vector<int> order;
  for (int i = 0; i < code.m; ++i)
    if (code.lengths[static_cast<std::size_t>(i)] > 0) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return code.lengths[static_cast<std::size_t>(a)] < code.lengths[static_cast<std::size_t>(b)];
  });
  std::uint64_t next = 0;
  int prev_len = 0;
  for (int idx : order) {
    const int len = code.lengths[static_cast<std::size_t>(idx)];
    next <<= (len - prev_len);
    code.words[static_cast<std::size_t>(idx)] = next;
    ++next;
    prev_len = len;
  }
  return code;
}

double expected_length(const PrefixCode& code, const CondensedDistribution& p) {
  if (p.m() != code.m)
    throw DistributionError("distribution and code alphabets differ");
  double e = 0.0;
  for (int i = 0; i < code.m; ++i) {
    const double pi = p.q()[static_cast<std::size_t>(i)];
    if (pi <= 0.0) continue;
    const int len = code.lengths[static_cast<std::size_t>(i)];
    if (len == 0)
      throw AbsoluteContinuityError("mass on uncoded symbol " + std::to_string(i + 1));
    e += pi * len;
  }
  return e;
}

int TargetDistanceCodeword::bit_length(int radius) const {
  const auto bits_for = [](std::uint64_t v) {
    int b = 0;
    while ((std::uint64_t{1} << b) < v) ++b;
    return b;
  };
  return bits_for(hit_step) + bits_for(static_cast<std::uint64_t>(std::max(radius, 1))) + 1;
}

TargetDistanceCodeword td_encode(std::span<const int> seq, int target, int radius) {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (std::abs(seq[i] - target) <= radius)
      return {i + 1, target - seq[i]};
  }
  throw NotEncodableError("no sequence element within radius of target");
}

int td_decode(std::span<const int> seq, const TargetDistanceCodeword& cw) {
  if (cw.hit_step == 0 || cw.hit_step > seq.size())
    throw MalformedCodewordError("hit step outside sequence");
  return seq[cw.hit_step - 1] + cw.offset;
}

}  // namespace crp
