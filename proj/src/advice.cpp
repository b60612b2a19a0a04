#include "crp/advice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <sstream>

#include "crp/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace crp {

namespace {

int ceil_log2_u64(std::uint64_t v) {
  return static_cast<int>(std::bit_width(v - 1));
}

void check_det_params(std::uint64_t n, int b) {
  if (n < 2) throw ConfigError("advice schemes need n >= 2");
  const int depth = ceil_log2_u64(n);
  if (b < 0 || b > depth) throw ConfigError("advice bits outside [0, ceil(log2 n)]");
}

// Count of participants inside [lo, hi).
std::size_t count_in(const std::vector<std::uint32_t>& ids, std::uint64_t lo,
                     std::uint64_t hi) {
  const auto first = std::lower_bound(ids.begin(), ids.end(), lo);
  const auto last = std::lower_bound(ids.begin(), ids.end(), hi);
  return static_cast<std::size_t>(last - first);
}

struct IdInterval {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;  // [lo, hi)
};

// Balanced id tree over [0, n): each step splits the interval with the left
// child taking the ceiling half, so b steps leave at most ceil(n / 2^b) ids.
// Returns the b traversal bits toward `target` and the remaining interval.
std::pair<std::uint64_t, IdInterval> descend_toward(std::uint64_t n, int b,
                                                    std::uint64_t target) {
  IdInterval iv{0, n};
  std::uint64_t bits = 0;
  for (int i = 0; i < b; ++i) {
    const std::uint64_t mid = iv.lo + (iv.hi - iv.lo + 1) / 2;
    const bool right = target >= mid;
    bits = (bits << 1) | (right ? 1 : 0);
    if (right)
      iv.lo = mid;
    else
      iv.hi = mid;
  }
  return {bits, iv};
}

}  // namespace

ParticipantSet::ParticipantSet(std::vector<std::uint32_t> members)
    : ids(std::move(members)) {
  std::sort(ids.begin(), ids.end());
  if (ids.empty()) throw ConfigError("participant set must be nonempty");
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw ConfigError("duplicate participant id");
}

ParticipantSet ParticipantSet::from_mask(std::uint64_t mask) {
  std::vector<std::uint32_t> members;
  while (mask) {
    members.push_back(static_cast<std::uint32_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return ParticipantSet(std::move(members));
}

DetNocdScheme det_nocd_scheme(std::uint64_t n, int b) {
  check_det_params(n, b);
  return {n, b, ceil_log2_u64(n)};
}

Advice DetNocdScheme::advise(const ParticipantSet& p) const {
  return {descend_toward(n, b, p.min_id()).first, b};
}

DetRunResult DetNocdScheme::run(const ParticipantSet& p) const {
  const auto [bits, iv] = descend_toward(n, b, p.min_id());
  (void)bits;
  // Ids of the selected subtree get one slot each in id order; the minimum
  // participant is the first present owner and transmits alone.
  const std::uint32_t transmitter = p.min_id();
  return {transmitter - iv.lo + 1, transmitter};
}

DetCdScheme det_cd_scheme(std::uint64_t n, int b) {
  check_det_params(n, b);
  return {n, b, ceil_log2_u64(n)};
}

Advice DetCdScheme::advise(const ParticipantSet& p) const {
  return {descend_toward(n, b, p.min_id()).first, b};
}

DetRunResult DetCdScheme::run(const ParticipantSet& p) const {
  auto [bits, iv] = descend_toward(n, b, p.min_id());
  (void)bits;
  std::uint64_t rounds = 0;
  while (iv.hi - iv.lo > 1) {
    const std::uint64_t mid = iv.lo + (iv.hi - iv.lo + 1) / 2;
    ++rounds;
    const std::size_t right = count_in(p.ids, mid, iv.hi);
    if (right == 1) {
      const auto it = std::lower_bound(p.ids.begin(), p.ids.end(), mid);
      return {rounds, *it};  // lone transmission during a vote solves CR
    }
    if (right >= 2)
      iv.lo = mid;  // collision: keep the right subtree
    else
      iv.hi = mid;  // silence: the right subtree holds no participant
  }
  ++rounds;  // the identified leaf transmits alone
  return {rounds, static_cast<std::uint32_t>(iv.lo)};
}

RandNocdScheme rand_nocd_scheme(std::uint64_t n, int b) {
  if (n < 2) throw ConfigError("advice schemes need n >= 2");
  const int m = range_count(n);
  if (b < 0 || b >= ceil_log2_u64(n)) throw ConfigError("advice bits outside [0, ceil(log2 n))");
  const int block_size =
      static_cast<int>((m + (1 << b) - 1) / (1 << b));  // ceil(m / 2^b)
  return {n, b, m, block_size};
}

Advice RandNocdScheme::advise_for_size(std::uint64_t k) const {
  return {static_cast<std::uint64_t>((range_of_size(k) - 1) / block_size), b};
}

std::vector<int> RandNocdScheme::block_ranges(std::uint64_t block) const {
  std::vector<int> ranges;
  const int first = static_cast<int>(block) * block_size + 1;
  for (int r = first; r <= std::min(first + block_size - 1, m); ++r) ranges.push_back(r);
  return ranges;
}

RunResult RandNocdScheme::run(std::uint64_t k, Rng& rng, std::size_t horizon,
                              bool exact_counts) const {
  const std::vector<int> ranges = block_ranges(advise_for_size(k).bits);
  UniformScheduleNoCD schedule;
  schedule.probs.reserve(horizon);
  for (std::size_t i = 0; i < horizon; ++i)
    schedule.probs.push_back(std::exp2(-ranges[i % ranges.size()]));
  return run_nocd(schedule, k, rng, exact_counts);
}

RandCdScheme rand_cd_scheme(std::uint64_t n, int b) {
  if (n < 2) throw ConfigError("advice schemes need n >= 2");
  const int m = range_count(n);
  if (b < 0) throw ConfigError("advice bits must be nonnegative");
  const int mm = ceil_log2_u64(static_cast<std::uint64_t>(m));
  const bool direct = b >= mm;
  const int block_size = direct ? 1 : (m + (1 << b) - 1) / (1 << b);
  return {n, b, m, direct, block_size};
}

Advice RandCdScheme::advise_for_size(std::uint64_t k) const {
  const int range = range_of_size(k);
  if (direct) return {static_cast<std::uint64_t>(range - 1), b};
  return {static_cast<std::uint64_t>((range - 1) / block_size), b};
}

std::vector<int> RandCdScheme::block_ranges(std::uint64_t block) const {
  std::vector<int> ranges;
  const int first = static_cast<int>(block) * block_size + 1;
  for (int r = first; r <= std::min(first + block_size - 1, m); ++r) ranges.push_back(r);
  return ranges;
}

RunResult RandCdScheme::run(std::uint64_t k, int reps, Rng& rng, std::size_t horizon,
                            bool exact_counts) const {
  const Advice a = advise_for_size(k);
  std::uint64_t rounds = 0;
  if (direct) {
    const double p = std::exp2(-static_cast<int>(a.bits) - 1);
    while (rounds < horizon) {
      ++rounds;
      const RoundOutcome out =
          exact_counts ? run_round_counted(k, p, rng) : run_round(k, p, rng);
      if (out.tag == Outcome::success) return {true, rounds};
    }
    return {false, rounds};
  }
  const std::vector<int> ranges = block_ranges(a.bits);
  while (rounds < horizon) {
    const RunResult attempt = willard_search(ranges, k, reps, rng, nullptr, exact_counts);
    rounds += attempt.rounds;
    if (attempt.solved) {
      if (rounds <= horizon) return {true, rounds};
      return {false, horizon};  // solved, but not within the round budget
    }
  }
  return {false, horizon};
}

SetFamily load_family(std::istream& in, int n) {
  if (n < 1 || n > 63) throw ConfigError("family universe must have 1..63 elements");
  SetFamily family;
  family.n = n;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::uint64_t mask = 0;
    std::stringstream ss(line);
    std::string token;
    while (std::getline(ss, token, ',')) {
      const unsigned long id = std::stoul(token);
      if (id >= static_cast<unsigned long>(n)) throw ConfigError("id outside universe");
      mask |= std::uint64_t{1} << id;
    }
    family.masks.push_back(mask);
  }
  return family;
}

SelectivityResult is_strongly_selective(const SetFamily& f, int n, int k, int limit) {
  if (n > limit)
    throw InfeasibleError("exhaustive selectivity check limited to n <= " +
                          std::to_string(limit));
  if (k < 1 || k > n) throw ConfigError("k must be in [1, n]");
  const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  for (std::uint64_t z = 1; z <= full; ++z) {
    if (std::popcount(z) > k) continue;
    std::uint64_t rest = z;
    while (rest) {
      const int elem = std::countr_zero(rest);
      rest &= rest - 1;
      bool isolated = false;
      for (const std::uint64_t mask : f.masks) {
        if ((mask & z) == (std::uint64_t{1} << elem)) {
          isolated = true;
          break;
        }
      }
      if (!isolated) return {false, z, elem};
    }
  }
  return {true, 0, -1};
}

NonInteractiveReport noninteractive_verify(const NonInteractiveScheme& scheme, int n,
                                           int limit) {
  if (n > limit)
    throw InfeasibleError("exhaustive verification limited to n <= " +
                          std::to_string(limit));
  NonInteractiveReport report;
  report.correct = true;
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t p = 1; p <= full && report.correct; ++p) {
    const ParticipantSet set = ParticipantSet::from_mask(p);
    const Advice a = scheme.advise(set);
    if (a.length > scheme.b) throw ConfigError("advice exceeds the bit budget");
    int transmitting = 0;
    for (const std::uint32_t id : set.ids)
      if (scheme.transmits(id, a)) ++transmitting;
    if (transmitting != 1) {
      report.correct = false;
      report.failing_set = p;
    }
  }
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << scheme.b); ++s) {
    std::uint64_t mask = 0;
    for (int id = 0; id < n; ++id)
      if (scheme.transmits(static_cast<std::uint32_t>(id), {s, scheme.b}))
        mask |= std::uint64_t{1} << id;
    report.induced_family.push_back(mask);
  }
  std::sort(report.induced_family.begin(), report.induced_family.end());
  report.induced_family.erase(
      std::unique(report.induced_family.begin(), report.induced_family.end()),
      report.induced_family.end());
  report.family_size_at_least_n =
      report.induced_family.size() >= static_cast<std::size_t>(n);
  return report;
}

NonInteractiveScheme trivial_noninteractive_scheme(int n) {
  const int bits = ceil_log2_u64(static_cast<std::uint64_t>(n));
  NonInteractiveScheme scheme;
  scheme.b = bits;
  scheme.advise = [bits](const ParticipantSet& p) {
    return Advice{p.min_id(), bits};
  };
  scheme.transmits = [](std::uint32_t id, Advice a) { return id == a.bits; };
  return scheme;
}

namespace {

template <typename Scheme>
ExhaustiveReport exhaustive_eval(const Scheme& scheme, std::uint64_t n, bool parallel) {
  if (n > 20) throw InfeasibleError("exhaustive enumeration limited to n <= 20");
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  ExhaustiveReport report;
  report.sets = full;
  std::uint64_t max_rounds = 0;
  bool ok = true;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : max_rounds) \
    reduction(&& : ok) if (parallel)
#endif
  for (std::int64_t mask = 1; mask <= static_cast<std::int64_t>(full); ++mask) {
    const ParticipantSet p = ParticipantSet::from_mask(static_cast<std::uint64_t>(mask));
    const DetRunResult r = scheme.run(p);
    max_rounds = std::max(max_rounds, r.rounds);
    const bool member =
        (static_cast<std::uint64_t>(mask) >> r.transmitter) & 1;
    ok = ok && member;
  }
  (void)parallel;
  report.max_rounds = max_rounds;
  report.all_single_transmitter = ok;
  for (std::uint64_t mask = 1; mask <= full; ++mask) {
    if (scheme.run(ParticipantSet::from_mask(mask)).rounds == max_rounds) {
      report.worst_mask = mask;
      break;
    }
  }
  return report;
}

}  // namespace

ExhaustiveReport exhaustive_det_nocd(std::uint64_t n, int b) {
  return exhaustive_eval(det_nocd_scheme(n, b), n, true);
}
ExhaustiveReport exhaustive_det_nocd_serial(std::uint64_t n, int b) {
  return exhaustive_eval(det_nocd_scheme(n, b), n, false);
}
ExhaustiveReport exhaustive_det_cd(std::uint64_t n, int b) {
  return exhaustive_eval(det_cd_scheme(n, b), n, true);
}
ExhaustiveReport exhaustive_det_cd_serial(std::uint64_t n, int b) {
  return exhaustive_eval(det_cd_scheme(n, b), n, false);
}

SchemeSearchReport search_single_round_families(int n, int family_size) {
  if (n < 2 || n > 16) throw InfeasibleError("family search limited to n <= 16");
  if (family_size < 1 || family_size > 4)
    throw InfeasibleError("family search limited to four subsets");
  const std::uint64_t sets = (std::uint64_t{1} << n) - 1;  // nonempty subsets
  const int words = static_cast<int>((sets + 1 + 63) / 64);

  // isolates[f] marks, per participant-set mask, whether subset f isolates
  // exactly one member. A family covers iff the union of its rows is all-ones
  // over masks 1..sets.
  std::vector<std::vector<std::uint64_t>> isolates(sets + 1,
                                                   std::vector<std::uint64_t>(words, 0));
  for (std::uint64_t f = 1; f <= sets; ++f)
    for (std::uint64_t p = 1; p <= sets; ++p)
      if (std::popcount(f & p) == 1)
        isolates[f][p / 64] |= std::uint64_t{1} << (p % 64);
  std::vector<std::uint64_t> target(words, 0);
  for (std::uint64_t p = 1; p <= sets; ++p)
    target[p / 64] |= std::uint64_t{1} << (p % 64);

  auto covered = [&](const std::vector<std::uint64_t>& acc) {
    for (int w = 0; w < words; ++w)
      if (acc[w] != target[w]) return false;
    return true;
  };

  SchemeSearchReport report;
  std::uint64_t checked = 0;
  bool found = false;
  std::uint64_t example[4] = {0, 0, 0, 0};

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(+ : checked)
#endif
  for (std::int64_t f1 = 1; f1 <= static_cast<std::int64_t>(sets); ++f1) {
    std::vector<std::uint64_t> acc1(words), acc2(words), acc3(words);
    auto try_family = [&](const std::vector<std::uint64_t>& acc, std::uint64_t a,
                          std::uint64_t b2, std::uint64_t c, std::uint64_t d) {
      if (!covered(acc)) return;
#ifdef _OPENMP
#pragma omp critical
#endif
      {
        if (!found) {
          found = true;
          example[0] = a;
          example[1] = b2;
          example[2] = c;
          example[3] = d;
        }
      }
    };
    acc1 = isolates[static_cast<std::uint64_t>(f1)];
    if (family_size == 1) {
      ++checked;
      try_family(acc1, static_cast<std::uint64_t>(f1), 0, 0, 0);
      continue;
    }
    for (std::uint64_t f2 = static_cast<std::uint64_t>(f1) + 1; f2 <= sets; ++f2) {
      for (int w = 0; w < words; ++w) acc2[w] = acc1[w] | isolates[f2][w];
      if (family_size == 2) {
        ++checked;
        try_family(acc2, static_cast<std::uint64_t>(f1), f2, 0, 0);
        continue;
      }
      for (std::uint64_t f3 = f2 + 1; f3 <= sets; ++f3) {
        for (int w = 0; w < words; ++w) acc3[w] = acc2[w] | isolates[f3][w];
        if (family_size == 3) {
          ++checked;
          try_family(acc3, static_cast<std::uint64_t>(f1), f2, f3, 0);
          continue;
        }
        for (std::uint64_t f4 = f3 + 1; f4 <= sets; ++f4) {
          ++checked;
          bool complete = true;
          for (int w = 0; w < words; ++w) {
            if ((acc3[w] | isolates[f4][w]) != target[w]) {
              complete = false;
              break;
            }
          }
          if (complete)
            try_family(target, static_cast<std::uint64_t>(f1), f2, f3, f4);
        }
      }
    }
  }
  report.families_checked = checked;
  report.found = found;
  for (int i = 0; i < 4; ++i) report.example_family[i] = example[i];
  return report;
}

}  // namespace crp
