#include "klsum/expsum.hpp"

#include <algorithm>
#include <cmath>

#include "klsum/parallel.hpp"
#include "sum_internal.hpp"

namespace klsum {

using internal::CoprimeFilter;
using internal::PhaseEval;
using internal::reduce_mod;
using internal::require_unit;

namespace {

inline void neumaier(double& s, double& c, double x) {
  double t = s + x;
  if (std::abs(s) >= std::abs(x))
    c += (s - t) + x;
  else
    c += (x - t) + s;
  s = t;
}

}  // namespace

void SumValue::add(cplx term) {
  neumaier(re, c_re, term.real());
  neumaier(im, c_im, term.imag());
  ++terms;
}

void SumValue::merge(const SumValue& other) {
  neumaier(re, c_re, other.re);
  neumaier(im, c_im, other.im);
  c_re += other.c_re;
  c_im += other.c_im;
  terms += other.terms;
}

// ---------------------------------------------------------------------------

namespace {

// Shared engine: sum of coeff(n) * e(a nbar / q) over n in (X, Z], (n,q)=1.
// Fixed blocks merged in order, so the bits never depend on worker count.
template <typename CoeffFn>
SumValue phased_sum(i64 a, u64 q, u64 X, u64 Z, unsigned workers, const CoeffFn& coeff) {
  SumValue total;
  if (Z <= X) return total;
  if (q == 1) {
    for (u64 n = X + 1; n <= Z; ++n) total.add(coeff(n));
    return total;
  }
  const CoprimeFilter is_coprime(q);
  const PhaseEval phase(q);
  const u64 a_red = reduce_mod(a, q);
  const u64 span = Z - X;
  const size_t nblocks = size_t((span + kSumBlock - 1) / kSumBlock);
  std::vector<SumValue> partials(nblocks);

  parallel_blocks(nblocks, workers, [&](size_t b) {
    const u64 lo = X + 1 + u64(b) * kSumBlock;
    const u64 hi = std::min(Z, lo + kSumBlock - 1);
    std::vector<u64> ns;
    ns.reserve(size_t(hi - lo + 1));
    for (u64 n = lo; n <= hi; ++n)
      if (is_coprime(n)) ns.push_back(n);
    std::vector<u64> invs(ns.size());
    batch_mod_inverse_into(ns, q, invs);
    SumValue& part = partials[b];
    for (size_t i = 0; i < ns.size(); ++i) {
      u64 j = mul_mod(a_red, invs[i], q);
      part.add(coeff(ns[i]) * phase(j));
    }
  });

  for (const SumValue& part : partials) total.merge(part);
  return total;
}

}  // namespace

bool theorem_q_in_range(u64 q, u64 N) {
  return (unsigned __int128)N * N >= (unsigned __int128)q;
}

SumValue twisted_sum_with_values(std::span<const cplx> fvals, i64 a, u64 q, u64 N,
                                 unsigned workers) {
  require_unit(a, q, "twisted_sum");
  if (fvals.size() < size_t(N) + 1)
    throw domain_error("twisted_sum: coefficient array shorter than N+1");
  return phased_sum(a, q, 0, N, workers, [&](u64 n) { return fvals[size_t(n)]; });
}

SumValue twisted_sum(const MultiplicativeFunction& f, i64 a, u64 q, u64 N, const SpfTable& table,
                     unsigned workers) {
  require_unit(a, q, "twisted_sum");
  if (N > table.limit)
    throw resource_error("twisted_sum: N " + std::to_string(N) + " exceeds table limit " +
                         std::to_string(table.limit));
  std::vector<cplx> fvals = sieve_values(f, N, table);
  return twisted_sum_with_values(fvals, a, q, N, workers);
}

std::vector<cplx> inverse_phases(i64 a, u64 q, u64 N, unsigned workers, u64* coprime_count) {
  require_unit(a, q, "inverse_phases");
  std::vector<cplx> phases(size_t(N) + 1, cplx(0.0, 0.0));
  if (q == 1) {
    for (u64 n = 1; n <= N; ++n) phases[size_t(n)] = cplx(1.0, 0.0);
    if (coprime_count) *coprime_count = N;
    return phases;
  }
  const CoprimeFilter is_coprime(q);
  const PhaseEval phase(q);
  const u64 a_red = reduce_mod(a, q);
  const size_t nblocks = size_t((N + kSumBlock - 1) / kSumBlock);
  std::vector<u64> counts(nblocks, 0);

  parallel_blocks(nblocks, workers, [&](size_t b) {
    const u64 lo = 1 + u64(b) * kSumBlock;
    const u64 hi = std::min(N, lo + kSumBlock - 1);
    std::vector<u64> ns;
    ns.reserve(size_t(hi - lo + 1));
    for (u64 n = lo; n <= hi; ++n)
      if (is_coprime(n)) ns.push_back(n);
    std::vector<u64> invs(ns.size());
    batch_mod_inverse_into(ns, q, invs);
    for (size_t i = 0; i < ns.size(); ++i) {
      u64 j = mul_mod(a_red, invs[i], q);
      phases[size_t(ns[i])] = phase(j);
    }
    counts[b] = ns.size();
  });

  if (coprime_count) {
    u64 c = 0;
    for (u64 v : counts) c += v;
    *coprime_count = c;
  }
  return phases;
}

// ---------------------------------------------------------------------------

SumValue incomplete_inverse_sum(i64 b, u64 q, u64 X, u64 Z, unsigned workers) {
  if (q < 1) throw domain_error("incomplete_inverse_sum: q must be >= 1");
  if (q > kModulusMax)
    throw domain_error("incomplete_inverse_sum: q exceeds 2^62-1 support limit");
  if (X > Z) throw domain_error("incomplete_inverse_sum: X must be <= Z");
  return phased_sum(b, q, X, Z, workers, [](u64) { return cplx(1.0, 0.0); });
}

double lemma2_rhs(i64 b, u64 q, u64 X, u64 Z, double eps, double C) {
  if (q < 1) throw domain_error("lemma2_rhs: q must be >= 1");
  if (X > Z) throw domain_error("lemma2_rhs: X must be <= Z");
  if (eps <= 0 || C <= 0) throw domain_error("lemma2_rhs: eps and C must be > 0");
  double g = double(gcd_twist(b, q));
  double len = double(Z - X);
  return C * ((len / double(q) + 1.0) * g + std::pow(double(q), 0.5 + eps));
}

bool PhiRatio::holds() const {
  return (unsigned __int128)num <= (unsigned __int128)bound * den;
}

PhiRatio phi_ratio(i64 b, u64 q) {
  if (q < 1) throw domain_error("phi_ratio: q must be >= 1");
  u64 g = gcd_twist(b, q);
  PhiRatio r;
  r.num = euler_phi(q);
  r.den = euler_phi(q / g);
  r.bound = g;
  u64 d = gcd_u64(r.num, r.den);
  r.num /= d;
  r.den /= d;
  return r;
}

// ---------------------------------------------------------------------------

SumValue complete_kloosterman(i64 a, i64 b, u64 q) {
  if (q < 1) throw domain_error("complete_kloosterman: q must be >= 1");
  if (q > kModulusMax)
    throw domain_error("complete_kloosterman: q exceeds 2^62-1 support limit");
  SumValue total;
  if (q == 1) {
    total.add(cplx(1.0, 0.0));  // the single residue x = 0, e(0) = 1
    return total;
  }
  const u64 a_red = reduce_mod(a, q);
  const u64 b_red = reduce_mod(b, q);
  const CoprimeFilter is_coprime(q);
  const PhaseEval phase(q);
  const size_t nblocks = size_t((q + kSumBlock - 1) / kSumBlock);
  for (size_t blk = 0; blk < nblocks; ++blk) {
    const u64 lo = 1 + u64(blk) * kSumBlock;
    const u64 hi = std::min(q, lo + kSumBlock - 1);
    std::vector<u64> xs;
    for (u64 x = lo; x <= hi; ++x)
      if (is_coprime(x)) xs.push_back(x);
    std::vector<u64> invs(xs.size());
    batch_mod_inverse_into(xs, q, invs);
    for (size_t i = 0; i < xs.size(); ++i) {
      u64 j = (mul_mod(a_red, xs[i], q) + mul_mod(b_red, invs[i], q)) % q;
      total.add(phase(j));
    }
  }
  return total;
}

// ---------------------------------------------------------------------------

TheoremRhs theorem_rhs(u64 q, u64 N, double eps, double C) {
  if (q < 1 || N < 1) throw domain_error("theorem_rhs: q and N must be >= 1");
  if (eps <= 0 || C <= 0) throw domain_error("theorem_rhs: eps and C must be > 0");
  double log6N = std::log(6.0 * double(N));
  double loglog = std::log(log6N);
  TheoremRhs r;
  r.epsilon = eps;
  r.constant = C;
  double tau_q = double(divisor_count(q));
  r.term_sqrt = std::sqrt(tau_q / double(q)) * double(N) * loglog;
  r.term_q = std::pow(double(q), 0.25 + eps / 2.0) * std::sqrt(double(N)) * std::sqrt(log6N);
  r.term_tail = double(N) / std::sqrt(loglog);
  r.total = C * (r.term_sqrt + r.term_q + r.term_tail);
  return r;
}

}  // namespace klsum
