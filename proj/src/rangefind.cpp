#include "crp/rangefind.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>

#include "crp/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace crp {

namespace {

int clamp_label(double p, int m) {
  if (!(p > 0.0) || p > 1.0) throw ConfigError("schedule probability outside (0, 1]");
  const double raw = -std::log2(p);
  const double rounded = std::round(raw);
  const int label = std::abs(raw - rounded) < 1e-9 ? static_cast<int>(rounded)
                                                   : static_cast<int>(std::ceil(raw));
  return std::clamp(label, 1, m);
}

int ceil_log2_int(int v) {
  return static_cast<int>(std::bit_width(static_cast<unsigned>(v) - 1U));
}

}  // namespace

RangeFindingSequence rf_construct(const UniformScheduleNoCD& a, std::uint64_t n) {
  if (a.probs.empty()) throw ConfigError("rf_construct needs a nonempty schedule");
  const int m = range_count(n);
  RangeFindingSequence s;
  s.values.reserve(2 * a.probs.size());
  int interleave = 1;
  for (double p : a.probs) {
    s.values.push_back(clamp_label(p, m));
    s.values.push_back(interleave);
    interleave = interleave == m ? 1 : interleave + 1;
  }
  return s;
}

std::optional<std::size_t> solve_sequence(const RangeFindingSequence& s, int target,
                                          int radius) {
  for (std::size_t i = 0; i < s.values.size(); ++i)
    if (std::abs(s.values[i] - target) <= radius) return i + 1;
  return std::nullopt;
}

double expected_sequence_time(const RangeFindingSequence& s,
                              const CondensedDistribution& y, int radius) {
  double e = 0.0;
  for (int range = 1; range <= y.m(); ++range) {
    const double q = y[range];
    if (q <= 0.0) continue;
    const auto step = solve_sequence(s, range, radius);
    if (!step)
      throw CoverageError("sequence never solves supported range " + std::to_string(range));
    e += q * static_cast<double>(*step);
  }
  return e;
}

RangeFindingTree cd_tree_transform(const UniformScheduleCD& a, std::uint64_t n,
                                   std::uint64_t graft_path) {
  const int m = range_count(n);
  const int graft_depth = std::max(1, ceil_log2_int(m));  // ceil(log2 log2 n)
  if (a.max_depth < graft_depth)
    throw ConfigError("CD schedule shallower than the graft depth");
  if (graft_path >= (std::uint64_t{1} << (graft_depth - 1)))
    throw ConfigError("graft path longer than the graft depth");

  RangeFindingTree tree;
  tree.m = m;

  // Breadth-first expansion of the history tree down to max_depth. The node
  // reached by the graft_path history at graft_depth gets T* as its only
  // child (all-silence leftmost path by default).
  struct Pending {
    CollisionHistory history;
    std::int32_t index;
  };
  std::deque<Pending> queue;
  tree.nodes.push_back({clamp_label(a.rule(CollisionHistory{}), m), -1, -1});
  queue.push_back({CollisionHistory{}, 0});
  std::int32_t graft_parent = -1;
  while (!queue.empty()) {
    auto [history, index] = queue.front();
    queue.pop_front();
    const int depth = history.length + 1;
    if (depth == graft_depth && history.bits == graft_path) {
      graft_parent = index;
      continue;  // children replaced by T*
    }
    if (history.length >= a.max_depth) continue;
    for (int bit = 0; bit <= 1; ++bit) {
      CollisionHistory child = history;
      child.push(bit == 1);
      const std::int32_t child_index = static_cast<std::int32_t>(tree.nodes.size());
      tree.nodes.push_back({clamp_label(a.rule(child), m), -1, -1});
      if (bit == 0)
        tree.nodes[static_cast<std::size_t>(index)].left = child_index;
      else
        tree.nodes[static_cast<std::size_t>(index)].right = child_index;
      queue.push_back({child, child_index});
    }
  }
  if (graft_parent < 0)
    throw ConfigError("graft point not reached");  // depth checked above

  // T*: complete tree over graft_depth + 1 levels, labels cycling 1..m in
  // breadth-first order, so every range appears within the first m nodes.
  const std::size_t star_nodes = (std::size_t{2} << graft_depth) - 1;
  const std::int32_t star_root = static_cast<std::int32_t>(tree.nodes.size());
  for (std::size_t t = 0; t < star_nodes; ++t)
    tree.nodes.push_back({static_cast<int>(t % static_cast<std::size_t>(m)) + 1, -1, -1});
  for (std::size_t t = 0; t < star_nodes; ++t) {
    const std::size_t left = 2 * t + 1, right = 2 * t + 2;
    if (left < star_nodes)
      tree.nodes[static_cast<std::size_t>(star_root) + t].left =
          star_root + static_cast<std::int32_t>(left);
    if (right < star_nodes)
      tree.nodes[static_cast<std::size_t>(star_root) + t].right =
          star_root + static_cast<std::int32_t>(right);
  }
  tree.nodes[static_cast<std::size_t>(graft_parent)].left = star_root;
  return tree;
}

std::optional<int> solve_tree(const RangeFindingTree& t, int target, int radius) {
  struct Item {
    std::int32_t index;
    int depth;
  };
  std::deque<Item> queue{{0, 1}};
  while (!queue.empty()) {
    const auto [index, depth] = queue.front();
    queue.pop_front();
    const auto& node = t.nodes[static_cast<std::size_t>(index)];
    if (std::abs(node.label - target) <= radius) return depth;
    if (node.left >= 0) queue.push_back({node.left, depth + 1});
    if (node.right >= 0) queue.push_back({node.right, depth + 1});
  }
  return std::nullopt;
}

ReductionReport reduction_check_nocd(const UniformScheduleNoCD& a,
                                     const SizeDistribution& x, std::size_t trials,
                                     std::uint64_t seed, int alpha,
                                     std::size_t min_trials) {
  ReductionReport report;
  report.radius = alpha * ceil_log2_int(range_count(x.n()));

  std::vector<std::uint64_t> rounds(trials, 0);
  std::vector<unsigned char> solved(trials, 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const std::uint64_t k = sample_size(x, rng);
    const RunResult r = run_nocd(a, k, rng);
    rounds[static_cast<std::size_t>(t)] = r.rounds;
    solved[static_cast<std::size_t>(t)] = r.solved ? 1 : 0;
  }
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    if (!solved[t]) ++report.unsolved_trials;
    sum += static_cast<double>(rounds[t]);
    sumsq += static_cast<double>(rounds[t]) * static_cast<double>(rounds[t]);
  }
  report.t_hat = sum / static_cast<double>(trials);
  const double var =
      std::max(0.0, sumsq / static_cast<double>(trials) - report.t_hat * report.t_hat);
  report.t_sigma = std::sqrt(var / static_cast<double>(trials));

  report.e_rf = expected_sequence_time(rf_construct(a, x.n()), condense(x), report.radius);
  report.inconclusive = trials < min_trials || report.unsolved_trials > 0;
  report.violation =
      !report.inconclusive && report.e_rf > 2.0 * report.t_hat + 3.0 * report.t_sigma;
  return report;
}

}  // namespace crp
