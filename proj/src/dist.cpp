#include "crp/dist.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace crp {

int range_count(std::uint64_t n) {
  if (n < 2) throw DistributionError("network size must be at least 2");
  return static_cast<int>(std::bit_width(n - 1));
}

int range_of_size(std::uint64_t k) {
  if (k < 2) throw DistributionError("size below 2 has no range");
  return static_cast<int>(std::bit_width(k - 1));
}

SizeDistribution::SizeDistribution(std::uint64_t n,
                                   std::vector<std::pair<std::uint64_t, double>> pmf)
    : n_(n) {
  if (n < 2) throw DistributionError("n must be >= 2");
  std::sort(pmf.begin(), pmf.end());
  double total = 0.0;
  std::uint64_t prev = 0;
  for (const auto& [k, p] : pmf) {
    if (k < 2) throw DistributionError("support excludes sizes below 2");
    if (k > n) throw DistributionError("size exceeds n");
    if (k == prev) throw DistributionError("duplicate size entry");
    if (p < 0.0) throw DistributionError("negative probability");
    prev = k;
    total += p;
    if (p > 0.0) pmf_.push_back({k, p});
  }
  if (std::abs(total - 1.0) > kMassTolerance)
    throw DistributionError("probabilities must sum to 1");
  if (pmf_.empty()) throw DistributionError("empty support");
  cdf_.reserve(pmf_.size());
  double acc = 0.0;
  for (const auto& [k, p] : pmf_) {
    acc += p;
    cdf_.push_back(acc);
  }
}

std::uint64_t SizeDistribution::quantile(double u) const {
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;  // float shortfall at the top; clamp to last
  return pmf_[static_cast<std::size_t>(it - cdf_.begin())].first;
}

CondensedDistribution::CondensedDistribution(std::vector<double> q) : q_(std::move(q)) {
  if (q_.empty()) throw DistributionError("empty condensed distribution");
  double total = 0.0;
  for (double v : q_) {
    if (v < 0.0) throw DistributionError("negative probability");
    total += v;
  }
  if (std::abs(total - 1.0) > kMassTolerance)
    throw DistributionError("condensed probabilities must sum to 1");
}

CondensedDistribution condense(const SizeDistribution& d) {
  std::vector<double> q(static_cast<std::size_t>(range_count(d.n())), 0.0);
  for (const auto& [k, p] : d.pmf()) q[static_cast<std::size_t>(range_of_size(k) - 1)] += p;
  return CondensedDistribution(std::move(q));
}

double entropy(const CondensedDistribution& q) {
  double h = 0.0;
  for (double v : q.q())
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

double kl_divergence(const CondensedDistribution& p, const CondensedDistribution& q) {
  if (p.m() != q.m()) throw DistributionError("KL divergence needs matching range counts");
  double d = 0.0;
  for (int i = 0; i < p.m(); ++i) {
    const double pi = p.q()[static_cast<std::size_t>(i)];
    const double qi = q.q()[static_cast<std::size_t>(i)];
    if (pi > 0.0) {
      if (qi <= 0.0) return std::numeric_limits<double>::infinity();
      d += pi * std::log2(pi / qi);
    }
  }
  return d;
}

std::uint64_t sample_size(const SizeDistribution& d, Rng& rng) {
  return d.quantile(rng.uniform01());
}

SizeDistribution point_mass(std::uint64_t n, std::uint64_t k) {
  return SizeDistribution(n, {{k, 1.0}});
}

SizeDistribution uniform_sizes(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, double>> pmf;
  pmf.reserve(static_cast<std::size_t>(n - 1));
  const double p = 1.0 / static_cast<double>(n - 1);
  for (std::uint64_t k = 2; k <= n; ++k) pmf.push_back({k, p});
  return SizeDistribution(n, std::move(pmf));
}

SizeDistribution geometric_sizes(std::uint64_t n, double ratio) {
  if (!(ratio > 0.0) || ratio >= 1.0)
    throw DistributionError("geometric ratio must be in (0, 1)");
  std::vector<std::pair<std::uint64_t, double>> pmf;
  double total = 0.0, w = 1.0;
  for (std::uint64_t k = 2; k <= n; ++k, w *= ratio) {
    if (w == 0.0) break;
    pmf.push_back({k, w});
    total += w;
  }
  for (auto& [k, p] : pmf) p /= total;
  return SizeDistribution(n, std::move(pmf));
}

SizeDistribution dyadic_ranges(std::uint64_t n, int h) {
  const int m = range_count(n);
  if (h < 0 || h > m) throw DistributionError("dyadic entropy parameter out of range");
  const std::uint64_t ranges = 1ULL << h;
  std::vector<std::pair<std::uint64_t, double>> pmf;
  const double p = 1.0 / static_cast<double>(ranges);
  for (std::uint64_t i = 1; i <= ranges; ++i)
    pmf.push_back({std::min(std::uint64_t{1} << i, n), p});
  return SizeDistribution(n, std::move(pmf));
}

SizeDistribution load_distribution(std::istream& in) {
  std::uint64_t n = 0;
  if (!(in >> n)) throw DistributionError("missing network size header");
  std::vector<std::pair<std::uint64_t, double>> pmf;
  std::uint64_t k;
  double p;
  while (in >> k >> p) pmf.push_back({k, p});
  return SizeDistribution(n, std::move(pmf));
}

SizeDistribution load_distribution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DistributionError("cannot open distribution file: " + path);
  return load_distribution(in);
}

void save_distribution(const SizeDistribution& d, std::ostream& out) {
  out << d.n() << "\n";
  out.precision(17);
  for (const auto& [k, p] : d.pmf()) out << k << " " << p << "\n";
}

SizeDistribution resolve_distribution(const std::string& spec, std::uint64_t n) {
  if (spec == "uniform") return uniform_sizes(n);
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string head = spec.substr(0, colon);
    const std::string arg = spec.substr(colon + 1);
    try {
      if (head == "point") return point_mass(n, std::stoull(arg));
      if (head == "geometric") return geometric_sizes(n, std::stod(arg));
      if (head == "dyadic") return dyadic_ranges(n, std::stoi(arg));
    } catch (const std::logic_error&) {
      throw DistributionError("bad generator argument: " + spec);
    }
  }
  return load_distribution_file(spec);
}

namespace {

// KL(q || tilt/mix(q, t)) for the two perturbation families, both monotone
// nondecreasing in t.
CondensedDistribution tilt(const CondensedDistribution& q, double lambda) {
  const int m = q.m();
  std::vector<double> logw(static_cast<std::size_t>(m),
                           -std::numeric_limits<double>::infinity());
  double logz = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    const double qi = q.q()[static_cast<std::size_t>(i)];
    if (qi <= 0.0) continue;
    const double lw = std::log2(qi) - lambda * static_cast<double>(i + 1);
    logw[static_cast<std::size_t>(i)] = lw;
    logz = std::max(logz, lw);
  }
  double acc = 0.0;
  for (int i = 0; i < m; ++i)
    if (std::isfinite(logw[static_cast<std::size_t>(i)]))
      acc += std::exp2(logw[static_cast<std::size_t>(i)] - logz);
  const double norm = logz + std::log2(acc);
  std::vector<double> y(static_cast<std::size_t>(m), 0.0);
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    if (!std::isfinite(logw[static_cast<std::size_t>(i)])) continue;
    y[static_cast<std::size_t>(i)] = std::exp2(logw[static_cast<std::size_t>(i)] - norm);
    total += y[static_cast<std::size_t>(i)];
  }
  for (double& v : y) v /= total;
  return CondensedDistribution(std::move(y));
}

CondensedDistribution mixture(const CondensedDistribution& q, double eps) {
  const int m = q.m();
  std::vector<double> y(static_cast<std::size_t>(m));
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    y[static_cast<std::size_t>(i)] =
        (1.0 - eps) * q.q()[static_cast<std::size_t>(i)] + eps / static_cast<double>(m);
    total += y[static_cast<std::size_t>(i)];
  }
  for (double& v : y) v /= total;
  return CondensedDistribution(std::move(y));
}

}  // namespace

CondensedDistribution perturb_to_divergence(const CondensedDistribution& q,
                                            double target_kl) {
  if (target_kl < 0.0) throw DistributionError("divergence target must be nonnegative");
  if (target_kl == 0.0) return q;
  const double kMaxLambda = 48.0;
  auto solve = [&](auto make, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (kl_divergence(q, make(mid)) < target_kl)
        lo = mid;
      else
        hi = mid;
    }
    return make(hi);
  };
  if (kl_divergence(q, tilt(q, kMaxLambda)) >= target_kl)
    return solve([&](double t) { return tilt(q, t); }, 0.0, kMaxLambda);
  if (kl_divergence(q, mixture(q, 1.0 - 1e-15)) >= target_kl)
    return solve([&](double t) { return mixture(q, t); }, 0.0, 1.0 - 1e-15);
  throw DistributionError("divergence target unreachable for this distribution");
}

}  // namespace crp
