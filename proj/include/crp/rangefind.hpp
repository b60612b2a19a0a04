#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "crp/algorithms.hpp"
#include "crp/dist.hpp"

namespace crp {

struct RangeFindingSequence {
  std::vector<int> values;  // each in 1..ceil(log2 n)
};

// Binary tree labeled with ranges; left child = history bit 0, right = 1.
// Root is at depth 1 so tree range-finding time lines up with round counts.
struct RangeFindingTree {
  struct Node {
    int label = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };
  std::vector<Node> nodes;  // nodes[0] is the root
  int m = 0;
};

/// RF-Construction: for each round of A appends ceil(log2(1/A[i])) clamped
/// into L(n), followed by an interleave value cycling over all of L(n).
/// Output length is exactly 2 * |A|.
RangeFindingSequence rf_construct(const UniformScheduleNoCD& a, std::uint64_t n);

/// Smallest 1-based step t with |S[t] - target| <= radius, if any.
std::optional<std::size_t> solve_sequence(const RangeFindingSequence& s, int target,
                                          int radius);

/// Expected solve step under Y. Throws CoverageError if some supported range
/// is never solved.
double expected_sequence_time(const RangeFindingSequence& s,
                              const CondensedDistribution& y, int radius);

/// Interprets a CD schedule as a tree (label = ceil(log2(1/A(h))) clamped),
/// then grafts the canonical complete tree T* holding all of L(n) below the
/// node at depth ceil(log2 log2 n) whose history bits equal graft_path
/// (0 = the all-silence leftmost path).
RangeFindingTree cd_tree_transform(const UniformScheduleCD& a, std::uint64_t n,
                                   std::uint64_t graft_path = 0);

/// Minimum depth (root = 1) of a node within radius of target, if any.
std::optional<int> solve_tree(const RangeFindingTree& t, int target, int radius);

struct ReductionReport {
  double t_hat = 0.0;     // Monte Carlo mean rounds for A under X
  double t_sigma = 0.0;   // standard error of t_hat
  double e_rf = 0.0;      // expected range-finding time of S_A under c(X)
  int radius = 0;
  std::uint64_t unsolved_trials = 0;
  bool violation = false;     // e_rf exceeds 2 * t_hat beyond 3 sigma
  bool inconclusive = false;  // too few trials, or A left trials unsolved
};

/// Empirical check of the no-CD reduction: E_rf(S_A, c(X), alpha log log n)
/// should not exceed twice A's expected contention-resolution time.
ReductionReport reduction_check_nocd(const UniformScheduleNoCD& a,
                                     const SizeDistribution& x, std::size_t trials,
                                     std::uint64_t seed, int alpha = 1,
                                     std::size_t min_trials = 100);

}  // namespace crp
