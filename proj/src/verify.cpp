#include "klsum/verify.hpp"

#include <algorithm>
#include <cmath>

#include "klsum/parallel.hpp"
#include "sum_internal.hpp"

namespace klsum {

using internal::reduce_mod;

// ---------------------------------------------------------------------------

BoundReport cauchy_check(const MultiplicativeFunction& f, i64 a, u64 q, size_t r, u64 N,
                         const BandScheme& bands, const SpfTable& table, unsigned workers) {
  double s1 = sigma1(f, a, q, r, N, bands, table, false, workers);
  Sigma2 s2 = sigma2(f, a, q, r, N, bands, table, workers);
  BoundReport rep;
  rep.kind = "cauchy";
  rep.f_id = f.id();
  rep.N = N;
  rep.q = q;
  rep.a = a;
  rep.bands = bands.descriptor() + "@r" + std::to_string(r);
  rep.lhs = s1;
  double sqrt_y = std::sqrt(double(s2.y_limit));
  double sqrt_s2 = std::sqrt(std::max(0.0, s2.direct));
  rep.rhs_terms = {{"sqrt_Y", sqrt_y}, {"sqrt_sigma2", sqrt_s2}};
  rep.rhs_total = sqrt_y * sqrt_s2;
  rep.ratio = rep.rhs_total > 0 ? rep.lhs / rep.rhs_total : 0.0;
  if (bands.empty()) rep.flags.push_back("empty_bands");
  return rep;
}

// ---------------------------------------------------------------------------

GcdPairSum gcd_pair_sum(u64 q, std::span<const u64> band_primes, u64 band_upper) {
  if (q < 1) throw domain_error("gcd_pair_sum: q must be >= 1");
  if (band_upper < 1) throw domain_error("gcd_pair_sum: band_upper must be >= 1");
  GcdPairSum g;
  g.band_upper = band_upper;
  g.inverse_invariant = true;

  std::vector<u64> ps;
  for (u64 p : band_primes) {
    if (p >= band_upper)
      throw domain_error("gcd_pair_sum: prime " + std::to_string(p) +
                         " not below band_upper " + std::to_string(band_upper));
    if (q == 1 || gcd_u64(p % q, q) == 1) ps.push_back(p);
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

  std::vector<u64> invs(ps.size());
  if (q > 1) batch_mod_inverse_into(ps, q, invs);

  const size_t m = ps.size();
  g.pair_count = m > 1 ? u64(m) * u64(m - 1) : 0;
  u64 total = 0;
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      u64 di = invs[i] >= invs[j] ? invs[i] - invs[j] : invs[j] - invs[i];
      u64 gcd_inv = di == 0 ? q : gcd_u64(di, q);
      u64 dp = ps[i] >= ps[j] ? ps[i] - ps[j] : ps[j] - ps[i];
      u64 dpr = dp % q;
      u64 gcd_direct = dpr == 0 ? q : gcd_u64(dpr, q);
      if (gcd_inv != gcd_direct) g.inverse_invariant = false;
      total += gcd_inv;
    }
  }
  g.sum = total;

  // truncated bound: sum over k | q, k < B, of k * #{ordered pairs p2 == p1 (mod k)}
  u64 bound = 0;
  for (u64 k : divisors(q)) {
    if (k >= band_upper) continue;
    u64 cong = 0;
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        if ((ps[i] % k) == (ps[j] % k)) ++cong;
      }
    bound += k * cong;
  }
  g.truncated_bound = bound;
  g.sum_le_truncated = g.sum <= g.truncated_bound;

  double tau_q = double(divisor_count(q));
  double b2 = double(band_upper) * double(band_upper);
  g.final_bound_ratio = b2 > 0 ? double(g.sum) / (tau_q * b2) : 0.0;
  return g;
}

BoundReport gcd_pair_report(u64 q, std::span<const u64> band_primes, u64 band_upper) {
  GcdPairSum g = gcd_pair_sum(q, band_primes, band_upper);
  BoundReport rep;
  rep.kind = "gcd_pairs";
  rep.q = q;
  rep.bands = "B" + std::to_string(band_upper);
  rep.lhs = double(g.sum);
  double tau_q = double(divisor_count(q));
  rep.rhs_terms = {{"truncated_bound", double(g.truncated_bound)},
                   {"tau_B2", tau_q * double(band_upper) * double(band_upper)}};
  rep.rhs_total = tau_q * double(band_upper) * double(band_upper);
  rep.ratio = g.final_bound_ratio;
  if (!g.sum_le_truncated) rep.flags.push_back("truncation_violated");
  if (!g.inverse_invariant) rep.flags.push_back("inverse_invariance_violated");
  return rep;
}

// ---------------------------------------------------------------------------

std::vector<BoundReport> lemma2_sweep(std::span<const u64> qs, std::span<const i64> bs,
                                      std::span<const RangeSpec> ranges, double eps, double C,
                                      unsigned workers) {
  struct Cell {
    u64 q;
    i64 b;
    u64 X, Z;
  };
  std::vector<Cell> cells;
  for (u64 q : qs) {
    for (i64 b : bs) {
      for (const RangeSpec& r : ranges) {
        u64 X = u64(std::llround(r.lo_mult * double(q)));
        u64 Z = u64(std::llround(r.hi_mult * double(q)));
        if (Z < X) std::swap(X, Z);
        cells.push_back({q, b, X, Z});
      }
    }
  }
  std::vector<BoundReport> reports(cells.size());
  parallel_blocks(cells.size(), workers, [&](size_t i) {
    const Cell& c = cells[i];
    SumValue s = incomplete_inverse_sum(c.b, c.q, c.X, c.Z, 1);
    double rhs = lemma2_rhs(c.b, c.q, c.X, c.Z, eps, C);
    BoundReport rep;
    rep.kind = "lemma2";
    rep.q = c.q;
    rep.a = c.b;
    rep.eps = eps;
    rep.C = C;
    rep.bands = std::to_string(c.X) + ":" + std::to_string(c.Z);
    rep.lhs = s.abs();
    double g = double(gcd_twist(c.b, c.q));
    rep.rhs_terms = {{"box_term", (double(c.Z - c.X) / double(c.q) + 1.0) * g},
                     {"q_power", std::pow(double(c.q), 0.5 + eps)}};
    rep.rhs_total = rhs;
    rep.ratio = rhs > 0 ? rep.lhs / rhs : 0.0;
    if (rhs >= double(c.Z - c.X)) rep.flags.push_back("trivial_bound");
    reports[i] = std::move(rep);
  });
  return reports;
}

// ---------------------------------------------------------------------------

i64 resolve_a(const ARule& rule, u64 q) {
  if (q == 1) return 0;
  if (rule.kind == ARule::Kind::Fixed) {
    i64 a = rule.fixed;
    if (gcd_twist(a, q) == 1) return a;
    // smallest value above the request that is a unit mod q
    for (i64 cand = a + 1;; ++cand) {
      if (gcd_twist(cand, q) == 1) return cand;
    }
  }
  // deterministic draws keyed by (seed, q), rejection-sampled to a unit
  u64 state = rule.seed ^ (q * 0x9E3779B97F4A7C15ull);
  for (;;) {
    state += 0x9E3779B97F4A7C15ull;
    u64 x = state;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    x ^= x >> 31;
    u64 cand = 1 + x % (q - 1);  // in [1, q-1]
    if (gcd_u64(cand, q) == 1) return i64(cand);
  }
}

std::vector<u64> log_spaced_moduli(u64 lo, u64 hi, size_t count) {
  std::vector<u64> qs;
  if (count == 0 || hi < lo) return qs;
  if (count == 1 || hi == lo) return {lo};
  double llo = std::log(double(lo));
  double lhi = std::log(double(hi));
  for (size_t i = 0; i < count; ++i) {
    double t = llo + (lhi - llo) * double(i) / double(count - 1);
    u64 q = u64(std::llround(std::exp(t)));
    q = std::max(lo, std::min(hi, q));
    qs.push_back(q);
  }
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  return qs;
}

std::vector<BoundReport> theorem_scan(std::span<const MultiplicativeFunction> fs,
                                      std::span<const u64> Ns, std::span<const u64> qs,
                                      const ARule& a_rule, double eps, double C,
                                      const SpfTable& table, unsigned workers) {
  std::vector<BoundReport> reports;
  for (u64 N : Ns) {
    if (N > table.limit)
      throw resource_error("theorem_scan: N " + std::to_string(N) + " exceeds table limit");
    // coefficient arrays once per (f, N); phases once per (N, q)
    std::vector<std::vector<cplx>> fvals;
    fvals.reserve(fs.size());
    for (const auto& f : fs) fvals.push_back(sieve_values(f, N, table));
    for (u64 q : qs) {
      i64 a = resolve_a(a_rule, q);
      std::vector<cplx> phases = inverse_phases(a, q, N, workers);
      TheoremRhs rhs = theorem_rhs(q, N, eps, C);
      for (size_t fi = 0; fi < fs.size(); ++fi) {
        const std::vector<cplx>& vals = fvals[fi];
        const size_t nblocks = size_t((N + kSumBlock - 1) / kSumBlock);
        std::vector<SumValue> partials(nblocks);
        parallel_blocks(nblocks, workers, [&](size_t b) {
          const u64 lo = 1 + u64(b) * kSumBlock;
          const u64 hi = std::min(N, lo + kSumBlock - 1);
          SumValue& part = partials[b];
          for (u64 n = lo; n <= hi; ++n) {
            cplx ph = phases[size_t(n)];
            if (ph == cplx(0.0, 0.0)) continue;
            part.add(vals[size_t(n)] * ph);
          }
        });
        SumValue total;
        for (const SumValue& p : partials) total.merge(p);

        BoundReport rep;
        rep.kind = "theorem";
        rep.f_id = fs[fi].id();
        rep.N = N;
        rep.q = q;
        rep.a = a;
        rep.eps = eps;
        rep.C = C;
        rep.lhs = total.abs();
        rep.rhs_terms = {{"term_sqrt", rhs.term_sqrt},
                         {"term_q", rhs.term_q},
                         {"term_tail", rhs.term_tail}};
        rep.rhs_total = rhs.total;
        rep.ratio = rhs.total > 0 ? rep.lhs / rhs.total : 0.0;
        if (rhs.total >= double(N)) rep.flags.push_back("trivial_bound");
        if (!theorem_q_in_range(q, N)) rep.flags.push_back("warning_q_range");
        reports.push_back(std::move(rep));
      }
    }
  }
  return reports;
}

std::vector<BoundReport> theorem_scan_grid(std::span<const MultiplicativeFunction> fs,
                                           std::span<const u64> Ns, size_t q_count,
                                           const ARule& a_rule, double eps, double C,
                                           const SpfTable& table, unsigned workers) {
  std::vector<BoundReport> reports;
  for (u64 N : Ns) {
    u64 hi = (unsigned __int128)N * N > (unsigned __int128)kModulusMax
                 ? kModulusMax
                 : N * N;
    std::vector<u64> qs = log_spaced_moduli(3, hi, q_count);
    std::vector<u64> one_n{N};
    auto part = theorem_scan(fs, one_n, qs, a_rule, eps, C, table, workers);
    reports.insert(reports.end(), part.begin(), part.end());
  }
  return reports;
}

// ---------------------------------------------------------------------------

ConstantEstimate estimate_constant(std::span<const BoundReport> reports) {
  if (reports.empty()) throw domain_error("estimate_constant: empty report list");
  ConstantEstimate e;
  e.c_obs = reports[0].ratio;
  e.argmax = 0;
  for (size_t i = 1; i < reports.size(); ++i) {
    if (reports[i].kind != reports[0].kind)
      throw domain_error("estimate_constant: mixed report kinds (" + reports[0].kind + " vs " +
                         reports[i].kind + ")");
    if (reports[i].ratio > e.c_obs) {
      e.c_obs = reports[i].ratio;
      e.argmax = i;
    }
  }
  return e;
}

}  // namespace klsum
