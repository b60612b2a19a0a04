#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "crp/errors.hpp"
#include "crp/rng.hpp"

namespace crp {

constexpr double kMassTolerance = 1e-12;

/// Number of geometric size ranges for a network of size n: ceil(log2 n).
int range_count(std::uint64_t n);

/// Range index i such that k lies in (2^{i-1}, 2^i]. Requires k >= 2.
int range_of_size(std::uint64_t k);

// Probability distribution over network sizes {2..n}, stored sparsely as
// (size, probability) pairs sorted by size. Sizes below 2 are rejected:
// a single node has no contention to resolve.
class SizeDistribution {
 public:
  SizeDistribution(std::uint64_t n, std::vector<std::pair<std::uint64_t, double>> pmf);

  std::uint64_t n() const { return n_; }
  const std::vector<std::pair<std::uint64_t, double>>& pmf() const { return pmf_; }

  /// CDF inversion: smallest support size k with CDF(k) > u. u in [0, 1).
  std::uint64_t quantile(double u) const;

 private:
  std::uint64_t n_;
  std::vector<std::pair<std::uint64_t, double>> pmf_;  // p > 0 entries only
  std::vector<double> cdf_;                            // aligned with pmf_
};

// c(X): probability per range i in {1..m}, m = ceil(log2 n).
class CondensedDistribution {
 public:
  explicit CondensedDistribution(std::vector<double> q);

  int m() const { return static_cast<int>(q_.size()); }
  const std::vector<double>& q() const { return q_; }
  double operator[](int range) const { return q_[range - 1]; }  // 1-based range

 private:
  std::vector<double> q_;
};

CondensedDistribution condense(const SizeDistribution& d);

/// Shannon entropy in bits; zero-mass terms contribute nothing.
double entropy(const CondensedDistribution& q);

/// D_KL(p || q) in bits. Returns +infinity when p has mass where q has none
/// (absolute-continuity violation); never clamps.
double kl_divergence(const CondensedDistribution& p, const CondensedDistribution& q);

std::uint64_t sample_size(const SizeDistribution& d, Rng& rng);

// Named generators.
SizeDistribution point_mass(std::uint64_t n, std::uint64_t k);
SizeDistribution uniform_sizes(std::uint64_t n);
SizeDistribution geometric_sizes(std::uint64_t n, double ratio);
/// Mass 2^-h on each of the first 2^h ranges, placed at the top size of the
/// range, so the condensed distribution is exactly dyadic with entropy h.
SizeDistribution dyadic_ranges(std::uint64_t n, int h);

// File format: line 1 = n, then "k p_k" lines; unlisted sizes have mass 0.
SizeDistribution load_distribution(std::istream& in);
SizeDistribution load_distribution_file(const std::string& path);
void save_distribution(const SizeDistribution& d, std::ostream& out);

/// Accepts "point:k", "uniform", "geometric:r", "dyadic:h" or a file path.
SizeDistribution resolve_distribution(const std::string& spec, std::uint64_t n);

/// Perturbs q so that kl_divergence(q, result) == target_kl (within 1e-9),
/// keeping full support on q's support. Uses an exponential tilt by range
/// index where that can reach the target, otherwise a uniform mixture.
CondensedDistribution perturb_to_divergence(const CondensedDistribution& q, double target_kl);

}  // namespace crp
