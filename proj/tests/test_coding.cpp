#include <cmath>
#include <vector>

#include "crp/coding.hpp"
#include "crp/dist.hpp"
#include "doctest.h"

using namespace crp;

namespace {

CondensedDistribution random_full_support(Rng& rng, int m) {
  std::vector<double> q(static_cast<std::size_t>(m));
  double total = 0.0;
  for (double& v : q) total += (v = rng.uniform01() + 1e-4);
  for (double& v : q) v /= total;
  return CondensedDistribution(q);
}

bool prefix_free(const PrefixCode& code) {
  for (int a = 1; a <= code.m; ++a) {
    if (!code.coded(a)) continue;
    for (int b = 1; b <= code.m; ++b) {
      if (a == b || !code.coded(b)) continue;
      if (code.length(a) > code.length(b)) continue;
      const int shift = code.length(b) - code.length(a);
      if ((code.word(b) >> shift) == code.word(a)) return false;
    }
  }
  return true;
}

// Test-side oracle: scan every position, keep the first within radius.
int oracle_first_hit(const std::vector<int>& seq, int target, int radius) {
  int best = -1;
  for (int i = static_cast<int>(seq.size()) - 1; i >= 0; --i)
    if (std::abs(seq[static_cast<std::size_t>(i)] - target) <= radius) best = i + 1;
  return best;
}

}  // namespace

TEST_CASE("shannon lengths: half-quarter-quarter") {
  const PrefixCode code = shannon_lengths(CondensedDistribution({0.5, 0.25, 0.25}));
  CHECK(code.length(1) == 1);
  CHECK(code.length(2) == 2);
  CHECK(code.length(3) == 2);
  CHECK(code.kraft_sum() <= 1.0 + 1e-12);
  CHECK(prefix_free(code));
}

TEST_CASE("shannon lengths: dyadic distribution achieves entropy exactly") {
  const CondensedDistribution q({0.5, 0.25, 0.125, 0.125});
  const PrefixCode code = shannon_lengths(q);
  CHECK(expected_length(code, q) == doctest::Approx(entropy(q)).epsilon(1e-12));
}

TEST_CASE("shannon lengths: point mass gets the one-bit floor") {
  const PrefixCode code = shannon_lengths(CondensedDistribution({0.0, 1.0, 0.0}));
  CHECK(code.length(2) == 1);
  CHECK_FALSE(code.coded(1));
  CHECK_FALSE(code.coded(3));
}

TEST_CASE("lengths monotone against probability order") {
  Rng rng(21);
  for (int it = 0; it < 100; ++it) {
    const int m = 2 + static_cast<int>(rng.below(30));
    const auto q = random_full_support(rng, m);
    const PrefixCode code = shannon_lengths(q);
    CHECK(code.kraft_sum() <= 1.0 + 1e-12);
    CHECK(prefix_free(code));
    for (int a = 1; a <= m; ++a)
      for (int b = 1; b <= m; ++b)
        if (q[a] >= q[b]) CHECK(code.length(a) <= code.length(b));
  }
}

TEST_CASE("expected length: matched distribution stays within one bit of entropy") {
  const CondensedDistribution q({0.5, 0.3, 0.2});
  const double e = expected_length(shannon_lengths(q), q);
  const double h = entropy(q);
  CHECK(e >= h - 1e-9);
  CHECK(e <= h + 1.0 + 1e-9);
}

TEST_CASE("expected length: mismatched bound, hand instance") {
  const CondensedDistribution p({0.9, 0.1});
  const CondensedDistribution q({0.5, 0.5});
  const double e = expected_length(shannon_lengths(q), p);
  const double bound = entropy(p) + kl_divergence(p, q);
  CHECK(e >= bound - 1e-9);
  CHECK(e <= bound + 1.0 + 1e-9);
}

TEST_CASE("expected length: source coding bounds on random instances") {
  Rng rng(22);
  for (int it = 0; it < 100; ++it) {
    const int m = 2 + static_cast<int>(rng.below(31));
    const auto p = random_full_support(rng, m);
    const double e = expected_length(shannon_lengths(p), p);
    const double h = entropy(p);
    CHECK(e >= h - 1e-9);
    CHECK(e <= h + 1.0 + 1e-9);
  }
}

TEST_CASE("expected length: mismatched bound on random pairs") {
  Rng rng(23);
  for (int it = 0; it < 100; ++it) {
    const int m = 2 + static_cast<int>(rng.below(31));
    const auto p = random_full_support(rng, m);
    const auto q = random_full_support(rng, m);
    const double e = expected_length(shannon_lengths(q), p);
    const double bound = entropy(p) + kl_divergence(p, q);
    CHECK(e >= bound - 1e-9);
    CHECK(e <= bound + 1.0 + 1e-9);
  }
}

TEST_CASE("expected length: absolute continuity error") {
  const PrefixCode code = shannon_lengths(CondensedDistribution({1.0, 0.0}));
  CHECK_THROWS_AS(expected_length(code, CondensedDistribution({0.5, 0.5})),
                  AbsoluteContinuityError);
}

TEST_CASE("target-distance examples") {
  const std::vector<int> single{3};
  const auto cw = td_encode(single, 3, 0);
  CHECK(cw.hit_step == 1);
  CHECK(cw.offset == 0);
  CHECK(td_decode(single, cw) == 3);

  const std::vector<int> s154{1, 5, 4};
  const auto cw2 = td_encode(s154, 4, 0);
  CHECK(cw2.hit_step == 3);
  CHECK(cw2.offset == 0);

  const std::vector<int> s15{1, 5};
  const auto cw3 = td_encode(s15, 4, 1);
  CHECK(cw3.hit_step == 2);
  CHECK(cw3.offset == -1);
  CHECK(td_decode(s15, cw3) == 4);
  CHECK(td_decode(s15, {2, -1}) == 4);

  CHECK_THROWS_AS(td_encode(s15, 3, 0), NotEncodableError);
  CHECK_THROWS_AS(td_decode(s15, {3, 0}), MalformedCodewordError);
}

TEST_CASE("target-distance round trip, exhaustive over |S|<=6, m<=8, radius<=2") {
  const int m = 8;
  std::uint64_t failures = 0;
  for (int len = 1; len <= 6; ++len) {
    std::vector<int> seq(static_cast<std::size_t>(len), 1);  // odometer over 1..m
    for (;;) {
      for (int radius = 0; radius <= 2; ++radius) {
        for (int target = 1; target <= m; ++target) {
          const int expect = oracle_first_hit(seq, target, radius);
          if (expect < 0) {
            try {
              td_encode(seq, target, radius);
              ++failures;
            } catch (const NotEncodableError&) {
            }
            continue;
          }
          const auto cw = td_encode(seq, target, radius);
          if (static_cast<int>(cw.hit_step) != expect) ++failures;
          if (td_decode(seq, cw) != target) ++failures;
          if (std::abs(cw.offset) > radius) ++failures;
        }
      }
      int pos = len - 1;
      while (pos >= 0 && seq[static_cast<std::size_t>(pos)] == m) {
        seq[static_cast<std::size_t>(pos)] = 1;
        --pos;
      }
      if (pos < 0) break;
      ++seq[static_cast<std::size_t>(pos)];
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("target-distance bit length") {
  CHECK(TargetDistanceCodeword{1, 0}.bit_length(0) == 1);   // sign bit only
  CHECK(TargetDistanceCodeword{4, 1}.bit_length(2) == 4);   // 2 + 1 + sign
  CHECK(TargetDistanceCodeword{5, -2}.bit_length(2) == 5);  // ceil(log2 5) = 3
}
