#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crp/algorithms.hpp"
#include "crp/dist.hpp"
#include "crp/rng.hpp"

namespace crp {

struct ParticipantSet {
  std::vector<std::uint32_t> ids;  // sorted, unique, nonempty

  explicit ParticipantSet(std::vector<std::uint32_t> members);
  static ParticipantSet from_mask(std::uint64_t mask);
  std::uint32_t min_id() const { return ids.front(); }
  std::size_t size() const { return ids.size(); }
};

// Advice strings are at most 64 bits; every participant receives the same one.
struct Advice {
  std::uint64_t bits = 0;
  int length = 0;
};

struct DetRunResult {
  std::uint64_t rounds = 0;
  std::uint32_t transmitter = 0;  // the lone transmitter in the solving round
};

// Deterministic no-CD scheme: advice is the first b steps of the balanced-id-
// tree traversal toward the minimum-id participant; players then give each
// leaf of the selected subtree one slot, in id order.
struct DetNocdScheme {
  std::uint64_t n = 0;
  int b = 0;
  int depth = 0;  // ceil(log2 n)

  Advice advise(const ParticipantSet& p) const;
  DetRunResult run(const ParticipantSet& p) const;
};
DetNocdScheme det_nocd_scheme(std::uint64_t n, int b);

// Deterministic CD scheme: advice prefixes the traversal; the remaining steps
// are resolved by collision-detector votes (right subtree transmits; collision
// or a lone transmission descends right, silence descends left). A lone
// transmission also solves contention resolution on the spot.
struct DetCdScheme {
  std::uint64_t n = 0;
  int b = 0;
  int depth = 0;

  Advice advise(const ParticipantSet& p) const;
  DetRunResult run(const ParticipantSet& p) const;
};
DetCdScheme det_cd_scheme(std::uint64_t n, int b);

// Randomized no-CD scheme: L(n) is split into 2^b contiguous blocks; advice
// names the block holding the true range and players cycle decay
// probabilities over that block only.
struct RandNocdScheme {
  std::uint64_t n = 0;
  int b = 0;
  int m = 0;
  int block_size = 0;

  Advice advise_for_size(std::uint64_t k) const;
  std::vector<int> block_ranges(std::uint64_t block) const;
  RunResult run(std::uint64_t k, Rng& rng, std::size_t horizon,
                bool exact_counts = false) const;
};
RandNocdScheme rand_nocd_scheme(std::uint64_t n, int b);

// Randomized CD scheme: advice names a block of ranges searched with Willard
// probes (repeated until success). With b >= ceil(log2 log2 n) the advice
// names the range directly and the scheme probes it every round.
struct RandCdScheme {
  std::uint64_t n = 0;
  int b = 0;
  int m = 0;
  bool direct = false;
  int block_size = 0;

  Advice advise_for_size(std::uint64_t k) const;
  std::vector<int> block_ranges(std::uint64_t block) const;
  RunResult run(std::uint64_t k, int reps, Rng& rng, std::size_t horizon,
                bool exact_counts = false) const;
};
RandCdScheme rand_cd_scheme(std::uint64_t n, int b);

struct SetFamily {
  int n = 0;
  std::vector<std::uint64_t> masks;
};
SetFamily load_family(std::istream& in, int n);

struct SelectivityResult {
  bool selective = false;
  std::uint64_t witness_set = 0;  // populated when not selective
  int witness_element = -1;
};

/// Definition check: every Z with 1 <= |Z| <= k has each element isolated by
/// some family member. Exhaustive over subsets; throws InfeasibleError when
/// n exceeds `limit`.
SelectivityResult is_strongly_selective(const SetFamily& f, int n, int k,
                                        int limit = 20);

// Single-round scheme: each player decides to transmit from (id, advice).
struct NonInteractiveScheme {
  int b = 0;
  std::function<Advice(const ParticipantSet&)> advise;
  std::function<bool(std::uint32_t, Advice)> transmits;
};

struct NonInteractiveReport {
  bool correct = false;
  std::optional<std::uint64_t> failing_set;
  std::vector<std::uint64_t> induced_family;  // distinct V(s) over all advice strings
  bool family_size_at_least_n = false;
};

NonInteractiveReport noninteractive_verify(const NonInteractiveScheme& scheme, int n,
                                           int limit = 20);

/// Trivial correct scheme: ceil(log2 n)-bit advice naming the minimum
/// participant, who alone transmits.
NonInteractiveScheme trivial_noninteractive_scheme(int n);

// Exhaustive evaluation of the deterministic schemes over every nonempty
// participant set. The OpenMP kernel and the serial reference must agree.
struct ExhaustiveReport {
  std::uint64_t sets = 0;
  std::uint64_t max_rounds = 0;
  std::uint64_t worst_mask = 0;  // smallest mask attaining max_rounds
  bool all_single_transmitter = true;
};
ExhaustiveReport exhaustive_det_nocd(std::uint64_t n, int b);
ExhaustiveReport exhaustive_det_nocd_serial(std::uint64_t n, int b);
ExhaustiveReport exhaustive_det_cd(std::uint64_t n, int b);
ExhaustiveReport exhaustive_det_cd_serial(std::uint64_t n, int b);

// Exhaustive search over families of `family_size` nonempty subsets of [n]
// for one that single-round-covers every participant set (the induced-family
// form of a b-bit non-interactive scheme, family_size = 2^b).
struct SchemeSearchReport {
  std::uint64_t families_checked = 0;
  bool found = false;
  std::uint64_t example_family[4] = {0, 0, 0, 0};
};
SchemeSearchReport search_single_round_families(int n, int family_size);

}  // namespace crp
