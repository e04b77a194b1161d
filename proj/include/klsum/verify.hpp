#pragma once

#include <span>
#include <vector>

#include "klsum/decomp.hpp"
#include "klsum/report.hpp"

namespace klsum {

// ---------------------------------------------------------------------------
// Cauchy step:  Sigma_1 <= sqrt(Y) * sqrt(Sigma_2)
// ---------------------------------------------------------------------------

BoundReport cauchy_check(const MultiplicativeFunction& f, i64 a, u64 q, size_t r, u64 N,
                         const BandScheme& bands, const SpfTable& table, unsigned workers = 1);

// ---------------------------------------------------------------------------
// gcd-pair sums over a prime band, with the divisor-truncation bound
// ---------------------------------------------------------------------------

struct GcdPairSum {
  u64 sum = 0;              // sum over ordered pairs p1 != p2 of (p1bar - p2bar, q)
  u64 truncated_bound = 0;  // sum_{k|q, k < B} k * #{ordered pairs, p2 == p1 mod k}
  double final_bound_ratio = 0;  // sum / (tau(q) * B^2)
  u64 band_upper = 0;            // B
  u64 pair_count = 0;            // ordered pairs considered
  bool sum_le_truncated = false;
  bool inverse_invariant = false;  // (p1bar-p2bar, q) == (p1-p2, q) on every pair
};

// band_primes need not be pre-filtered; primes dividing q are skipped.
// band_upper is B_{r+1}, the truncation point and ratio normalizer.
GcdPairSum gcd_pair_sum(u64 q, std::span<const u64> band_primes, u64 band_upper);

BoundReport gcd_pair_report(u64 q, std::span<const u64> band_primes, u64 band_upper);

// ---------------------------------------------------------------------------
// lemma2 sweep: incomplete inverse sums against their box bound
// ---------------------------------------------------------------------------

// Ranges are multiples of q: X = round(lo_mult * q), Z = round(hi_mult * q).
struct RangeSpec {
  double lo_mult = 0;
  double hi_mult = 1;
};

std::vector<BoundReport> lemma2_sweep(std::span<const u64> qs, std::span<const i64> bs,
                                      std::span<const RangeSpec> ranges, double eps, double C,
                                      unsigned workers = 1);

// ---------------------------------------------------------------------------
// theorem scan: twisted sums against the three-term bound
// ---------------------------------------------------------------------------

struct ARule {
  enum class Kind { Fixed, Random } kind = Kind::Fixed;
  i64 fixed = 1;
  u64 seed = 0;

  static ARule fixed_a(i64 a) { return {Kind::Fixed, a, 0}; }
  static ARule random(u64 seed) { return {Kind::Random, 1, seed}; }
};

// Fixed rule: the given a when coprime to q, else the smallest larger value
// coprime to q. Random rule: deterministic unit mod q drawn from (seed, q).
i64 resolve_a(const ARule& rule, u64 q);

// Deterministic log-spaced moduli in [lo, hi], deduplicated, ascending.
std::vector<u64> log_spaced_moduli(u64 lo, u64 hi, size_t count);

// One report per (f, N, q): lhs = |twisted_sum|, rhs = theorem_rhs terms.
// Cells with rhs_total >= N carry the trivial_bound flag; q > N^2 carries
// warning_q_range. The q list is shared across N (explicit grid).
std::vector<BoundReport> theorem_scan(std::span<const MultiplicativeFunction> fs,
                                      std::span<const u64> Ns, std::span<const u64> qs,
                                      const ARule& a_rule, double eps, double C,
                                      const SpfTable& table, unsigned workers = 1);

// Same, with per-N moduli grids spanning [3, N^2].
std::vector<BoundReport> theorem_scan_grid(std::span<const MultiplicativeFunction> fs,
                                           std::span<const u64> Ns, size_t q_count,
                                           const ARule& a_rule, double eps, double C,
                                           const SpfTable& table, unsigned workers = 1);

// ---------------------------------------------------------------------------
// Empirical implied constants
// ---------------------------------------------------------------------------

struct ConstantEstimate {
  double c_obs = 0;
  size_t argmax = 0;  // index into the report list
};

// Max ratio and its cell; throws domain_error on an empty list.
ConstantEstimate estimate_constant(std::span<const BoundReport> reports);

}  // namespace klsum
