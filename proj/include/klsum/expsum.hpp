#pragma once

#include <span>
#include <vector>

#include "klsum/arith.hpp"
#include "klsum/mult_func.hpp"

namespace klsum {

// Compensated complex accumulator (Neumaier variant, per component).
// Partials merge deterministically: merging block partials in a fixed order
// gives a result independent of how many workers produced them.
struct SumValue {
  double re = 0.0, im = 0.0;       // running sums
  double c_re = 0.0, c_im = 0.0;   // compensation
  u64 terms = 0;

  void add(cplx term);
  void merge(const SumValue& other);
  cplx value() const { return cplx(re + c_re, im + c_im); }
  cplx compensation() const { return cplx(c_re, c_im); }
  double abs() const { return std::abs(value()); }
};

// Fixed block width for all block-partitioned sums; the partition (and hence
// the merge order and the bits of the result) never depends on worker count.
inline constexpr u64 kSumBlock = u64(1) << 16;

// ---------------------------------------------------------------------------
// The twisted incomplete sum  sum_{n<=N, (n,q)=1} f(n) e(a nbar / q)
// ---------------------------------------------------------------------------

// Requires gcd(a, q) = 1 and N <= table.limit. q = 1 means every n counts
// with phase 1. Callers that care about the q <= N^2 applicability range
// check theorem_q_in_range and emit their own warning; this stays silent.
SumValue twisted_sum(const MultiplicativeFunction& f, i64 a, u64 q, u64 N, const SpfTable& table,
                     unsigned workers = 1);

// Same sum over precomputed coefficient values (fvals[n] = f(n), size N+1).
SumValue twisted_sum_with_values(std::span<const cplx> fvals, i64 a, u64 q, u64 N,
                                 unsigned workers = 1);

// phase[n] = e(a nbar / q) for (n, q) = 1, else 0; phase[0] = 0.
// coprime_count receives #{n <= N : (n,q)=1} when non-null.
std::vector<cplx> inverse_phases(i64 a, u64 q, u64 N, unsigned workers = 1,
                                 u64* coprime_count = nullptr);

bool theorem_q_in_range(u64 q, u64 N);

// ---------------------------------------------------------------------------
// Incomplete inverse sums and the lemma2 bound
// ---------------------------------------------------------------------------

// sum_{X < n <= Z, (n,q)=1} e(b nbar / q); b unrestricted (gcd may exceed 1).
SumValue incomplete_inverse_sum(i64 b, u64 q, u64 X, u64 Z, unsigned workers = 1);

// C * ( ((Z-X)/q + 1) (b,q) + q^{1/2+eps} ), with (0,q) = q.
double lemma2_rhs(i64 b, u64 q, u64 X, u64 Z, double eps, double C);

// phi(q) / phi(q/(b,q)) as an exact reduced fraction, and the bound (b,q).
struct PhiRatio {
  u64 num = 1, den = 1;  // reduced
  u64 bound = 1;         // gcd(b, q)
  bool holds() const;    // num/den <= bound, checked in exact integers
};
PhiRatio phi_ratio(i64 b, u64 q);

// ---------------------------------------------------------------------------
// Sanity oracle: the classical complete sum S(a,b;q)
// ---------------------------------------------------------------------------

SumValue complete_kloosterman(i64 a, i64 b, u64 q);

// ---------------------------------------------------------------------------
// The three-term bound
// ---------------------------------------------------------------------------

struct TheoremRhs {
  double term_sqrt = 0;  // sqrt(tau(q)/q) N loglog(6N)
  double term_q = 0;     // q^{1/4+eps/2} N^{1/2} (log 6N)^{1/2}
  double term_tail = 0;  // N / sqrt(loglog 6N)
  double epsilon = 0;
  double constant = 1;
  double total = 0;      // constant * (sum of terms)
};

TheoremRhs theorem_rhs(u64 q, u64 N, double eps, double C);

}  // namespace klsum
