#include "klsum/decomp.hpp"

#include <algorithm>
#include <cmath>

#include "klsum/parallel.hpp"
#include "sum_internal.hpp"

namespace klsum {

using internal::CoprimeFilter;
using internal::NeumaierReal;
using internal::PhaseEval;
using internal::reduce_mod;
using internal::require_unit;

// ---------------------------------------------------------------------------

PaperParams paper_params(double N) {
  if (!(N >= 1)) throw domain_error("paper_params: N must be >= 1");
  PaperParams p;
  p.n = N;
  p.D1 = std::log(6.0 * N);
  p.d1 = std::log(p.D1);
  p.d0 = std::sqrt(p.d1);
  p.D0 = std::exp(p.d0);
  p.r_lo = int(std::floor(p.d0)) + 1;
  p.r_hi = int(std::floor(p.d1)) - 1;
  return p;
}

int BandScheme::band_of(u64 p) const {
  if (empty() || p < boundaries.front() || p >= boundaries.back()) return -1;
  auto it = std::upper_bound(boundaries.begin(), boundaries.end(), p);
  return int(it - boundaries.begin()) - 1;
}

std::string BandScheme::descriptor() const {
  std::string s = provenance == Provenance::PaperDefault ? "paper:" : "";
  if (boundaries.empty()) return s + "empty";
  for (size_t i = 0; i < boundaries.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(boundaries[i]);
  }
  return s;
}

BandScheme make_bands_paper(double N) {
  PaperParams p = paper_params(N);
  BandScheme b;
  b.provenance = BandScheme::Provenance::PaperDefault;
  b.r_base = p.r_lo;
  if (p.empty()) return b;
  for (int r = p.r_lo; r <= p.r_hi + 1; ++r) {
    u64 boundary = u64(std::ceil(std::exp(double(r))));
    if (!b.boundaries.empty() && boundary <= b.boundaries.back()) continue;
    b.boundaries.push_back(boundary);
  }
  if (b.boundaries.size() < 2) b.boundaries.clear();
  return b;
}

BandScheme make_bands_custom(std::vector<u64> boundaries) {
  if (boundaries.empty()) throw config_error("make_bands: need at least one boundary");
  if (boundaries.front() < 2) throw config_error("make_bands: B_0 must be >= 2");
  for (size_t i = 1; i < boundaries.size(); ++i) {
    if (boundaries[i] <= boundaries[i - 1])
      throw config_error("make_bands: boundaries must be strictly increasing");
  }
  BandScheme b;
  b.boundaries = std::move(boundaries);
  b.provenance = BandScheme::Provenance::Custom;
  return b;
}

// ---------------------------------------------------------------------------

Classification classify(u64 n, const BandScheme& bands, const SpfTable& table) {
  if (n < 1) throw domain_error("classify: n must be >= 1");
  if (n > table.limit)
    throw resource_error("classify: n exceeds table limit " + std::to_string(table.limit));
  Classification c;
  c.n = n;
  int best = -1;
  u64 best_p = 0;
  int best_mult = 0;
  u64 m = n;
  while (m > 1) {
    u64 p = table.spf[size_t(m)];
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    int b = bands.band_of(p);
    if (b >= 0) {
      if (best < 0 || b < best) {
        best = b;
        best_p = p;
        best_mult = e;
      } else if (b == best) {
        best_mult += e;
      }
    }
  }
  if (best < 0) {
    c.verdict = Verdict::Rough;
  } else if (best_mult == 1) {
    c.verdict = Verdict::Clean;
    c.band = best;
    c.band_prime = best_p;
  } else {
    c.verdict = Verdict::Discard;
  }
  return c;
}

std::pair<u64, u64> split(u64 n, const BandScheme& bands, const SpfTable& table) {
  Classification c = classify(n, bands, table);
  if (c.verdict != Verdict::Clean)
    throw domain_error("split: n = " + std::to_string(n) + " is not Clean");
  return {c.band_prime, n / c.band_prime};
}

// ---------------------------------------------------------------------------

RoughCount rough_count(u64 N, const BandScheme& bands) {
  RoughCount rc;
  if (N == 0) return rc;
  rc.lemma1_bound = double(N) / std::sqrt(std::log(std::log(6.0 * double(N))));
  if (bands.empty()) {
    rc.count = N;  // nothing excluded
    return rc;
  }
  std::vector<bool> has_band_prime(size_t(N) + 1, false);
  for (u64 p : primes_in_range(bands.window_lo(), std::min(bands.window_hi(), N + 1))) {
    for (u64 m = p; m <= N; m += p) has_band_prime[size_t(m)] = true;
  }
  u64 count = 0;
  for (u64 n = 1; n <= N; ++n)
    if (!has_band_prime[size_t(n)]) ++count;
  rc.count = count;
  return rc;
}

MertensProduct mertens_product(double D0, double D1) {
  if (!(D0 >= 2) || !(D1 >= D0)) throw domain_error("mertens_product: need 2 <= D0 <= D1");
  MertensProduct m;
  m.approx = std::log(D0) / std::log(D1);
  u64 lo = u64(std::ceil(D0));
  u64 hi = u64(std::ceil(D1));
  double prod = 1.0;
  for (u64 p : primes_in_range(lo, hi)) prod *= 1.0 - 1.0 / double(p);
  m.product = prod;
  return m;
}

BandPrimeCount band_prime_count(const BandScheme& bands, size_t r) {
  if (r >= bands.band_count()) throw domain_error("band_prime_count: band index out of range");
  BandPrimeCount b;
  b.count = primes_in_range(bands.lower(r), bands.upper(r)).size();
  if (bands.provenance == BandScheme::Provenance::PaperDefault) {
    double pr = double(bands.r_base) + double(r);
    b.pnt_ratio = double(b.count) * pr / std::exp(pr);
  } else {
    double width = double(bands.upper(r) - bands.lower(r));
    double expected = width / std::log(double(bands.lower(r)));
    b.pnt_ratio = expected > 0 ? double(b.count) / expected : 0.0;
  }
  return b;
}

DiscardSizes discard_sizes(u64 N, const SpfTable* table) {
  PaperParams p = paper_params(double(N));
  DiscardSizes d;
  d.lemma1_bound = double(N) / p.d0;

  auto members_with_factor_in = [&](double lo, double hi) -> u64 {
    u64 wlo = std::max<u64>(2, u64(std::ceil(lo)));
    u64 whi = u64(std::ceil(hi));
    if (whi <= wlo) return 0;
    BandScheme w = make_bands_custom({wlo, whi});
    return N - rough_count(N, w).count;
  };

  int fd0 = int(std::floor(p.d0));
  int fd1 = int(std::floor(p.d1));
  d.s = members_with_factor_in(p.D0, p.D1);
  d.s1 = members_with_factor_in(std::exp(double(fd0)), std::exp(double(fd1 + 1)));
  d.s2 = members_with_factor_in(std::exp(double(fd0 + 1)), std::exp(double(fd1)));
  BandScheme paper = make_bands_paper(double(N));
  if (paper.empty()) {
    d.s3 = 0;
  } else {
    if (!table || N > table->limit)
      throw resource_error("discard_sizes: needs an SpfTable covering N");
    u64 s3 = 0;
    for (u64 n = 1; n <= N; ++n)
      if (classify(n, paper, *table).verdict == Verdict::Clean) ++s3;
    d.s3 = s3;
  }
  d.s_minus_s2 = d.s - std::min(d.s, d.s2);
  d.s2_minus_s3 = d.s2 - std::min(d.s2, d.s3);
  return d;
}

// ---------------------------------------------------------------------------

PartitionCounts partition_counts(u64 N, const BandScheme& bands, const SpfTable& table) {
  if (N > table.limit) throw resource_error("partition_counts: N exceeds table limit");
  PartitionCounts pc;
  for (u64 n = 1; n <= N; ++n) {
    switch (classify(n, bands, table).verdict) {
      case Verdict::Rough: ++pc.rough; break;
      case Verdict::Clean: ++pc.clean; break;
      case Verdict::Discard: ++pc.discard; break;
    }
  }
  return pc;
}

std::vector<int> min_band_array(u64 N, const BandScheme& bands) {
  std::vector<int> mb(size_t(N) + 1, -1);
  for (size_t r = 0; r < bands.band_count(); ++r) {
    for (u64 p : primes_in_range(bands.lower(r), std::min(bands.upper(r), N + 1))) {
      for (u64 m = p; m <= N; m += p)
        if (mb[size_t(m)] < 0) mb[size_t(m)] = int(r);
    }
  }
  return mb;
}

Decomposition decomposed_sum(const MultiplicativeFunction& f, i64 a, u64 q, u64 N,
                             const BandScheme& bands, const SpfTable& table, unsigned workers) {
  require_unit(a, q, "decomposed_sum");
  if (N > table.limit) throw resource_error("decomposed_sum: N exceeds table limit");

  std::vector<cplx> fvals = sieve_values(f, N, table);
  std::vector<cplx> phases = inverse_phases(a, q, N, workers);

  Decomposition out;
  const size_t nblocks = size_t((N + kSumBlock - 1) / kSumBlock);
  std::vector<SumValue> part_clean(nblocks), part_rough(nblocks), part_discard(nblocks);
  parallel_blocks(nblocks, workers, [&](size_t b) {
    const u64 lo = 1 + u64(b) * kSumBlock;
    const u64 hi = std::min(N, lo + kSumBlock - 1);
    for (u64 n = lo; n <= hi; ++n) {
      cplx ph = phases[size_t(n)];
      if (ph == cplx(0.0, 0.0)) continue;  // (n, q) > 1
      cplx term = fvals[size_t(n)] * ph;
      switch (classify(n, bands, table).verdict) {
        case Verdict::Rough: part_rough[b].add(term); break;
        case Verdict::Clean: part_clean[b].add(term); break;
        case Verdict::Discard: part_discard[b].add(term); break;
      }
    }
  });
  for (size_t b = 0; b < nblocks; ++b) {
    out.clean.merge(part_clean[b]);
    out.rough.merge(part_rough[b]);
    out.discard.merge(part_discard[b]);
  }

  // rearranged clean sum: bands r, band primes p coprime to q, and y <= N/p with y
  // free of bands <= r and (y, q) = 1, of f(p) f(y) e(a pbar ybar / q).
  if (!bands.empty() && q >= 1) {
    const u64 y_max = N / std::max<u64>(bands.window_lo(), 1);
    const std::vector<int> mb = min_band_array(y_max, bands);
    const CoprimeFilter is_coprime(q);
    const PhaseEval phase(q);
    const u64 a_red = reduce_mod(a, q);

    // inverses of every coprime y <= y_max
    std::vector<u64> yinv(size_t(y_max) + 1, 0);
    {
      std::vector<u64> ys;
      ys.reserve(size_t(y_max));
      for (u64 y = 1; y <= y_max; ++y)
        if (is_coprime(y)) ys.push_back(y);
      std::vector<u64> invs(ys.size());
      if (q > 1) batch_mod_inverse_into(ys, q, invs);
      for (size_t i = 0; i < ys.size(); ++i) yinv[size_t(ys[i])] = invs[i];
    }

    for (size_t r = 0; r < bands.band_count(); ++r) {
      for (u64 p : primes_in_range(bands.lower(r), std::min(bands.upper(r), N + 1))) {
        if (!is_coprime(p)) continue;
        const cplx fp = fvals[size_t(p)];
        const u64 cp = q == 1 ? 0 : mul_mod(a_red, mod_inverse(i64(p), q), q);
        const u64 ylim = N / p;
        for (u64 y = 1; y <= ylim; ++y) {
          if (mb[size_t(y)] >= 0 && mb[size_t(y)] <= int(r)) continue;
          if (!is_coprime(y)) continue;
          const u64 j = q == 1 ? 0 : mul_mod(cp, yinv[size_t(y)], q);
          out.rearranged_clean.add(fp * fvals[size_t(y)] * phase(j));
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

u64 sigma_y_limit(u64 N, const BandScheme& bands, size_t r) {
  if (r >= bands.band_count()) throw domain_error("sigma_y_limit: band index out of range");
  return N / bands.lower(r);
}

namespace {

struct BandPrimeData {
  std::vector<u64> primes;   // band primes coprime to q, ascending, <= N
  std::vector<cplx> fvals;   // f(p)
  std::vector<u64> c;        // a * pbar mod q
};

BandPrimeData band_prime_data(const MultiplicativeFunction& f, i64 a, u64 q, size_t r, u64 N,
                              const BandScheme& bands, const SpfTable& table) {
  BandPrimeData d;
  const CoprimeFilter is_coprime(q);
  const u64 a_red = reduce_mod(a, q);
  for (u64 p : primes_in_range(bands.lower(r), std::min(bands.upper(r), N + 1))) {
    if (!is_coprime(p)) continue;
    d.primes.push_back(p);
    d.fvals.push_back(eval_at(f, p, &table));
    d.c.push_back(q == 1 ? 0 : mul_mod(a_red, mod_inverse(i64(p), q), q));
  }
  return d;
}

// coprime y <= Y ascending, paired with their inverses mod q
std::vector<std::pair<u64, u64>> coprime_y_inverses(u64 q, u64 Y) {
  std::vector<std::pair<u64, u64>> yv;
  const CoprimeFilter is_coprime(q);
  std::vector<u64> ys;
  ys.reserve(size_t(Y));
  for (u64 y = 1; y <= Y; ++y)
    if (is_coprime(y)) ys.push_back(y);
  std::vector<u64> invs(ys.size());
  if (q > 1) batch_mod_inverse_into(ys, q, invs);
  yv.reserve(ys.size());
  for (size_t i = 0; i < ys.size(); ++i) yv.emplace_back(ys[i], invs[i]);
  return yv;
}

}  // namespace

namespace {

constexpr size_t kYBlock = 4096;  // yv entries per parallel block

// |inner sum| (and optionally its square) accumulated over a fixed partition
// of the coprime-y list; partials merged in block order.
template <typename PerY>
void over_y_blocks(const std::vector<std::pair<u64, u64>>& yv, unsigned workers,
                   const PerY& per_y, std::vector<NeumaierReal>& partials) {
  const size_t nblocks = (yv.size() + kYBlock - 1) / kYBlock;
  partials.assign(nblocks, {});
  parallel_blocks(nblocks, workers, [&](size_t b) {
    const size_t lo = b * kYBlock;
    const size_t hi = std::min(yv.size(), lo + kYBlock);
    for (size_t i = lo; i < hi; ++i) per_y(yv[i].first, yv[i].second, partials[b]);
  });
}

}  // namespace

double sigma1(const MultiplicativeFunction& f, i64 a, u64 q, size_t r, u64 N,
              const BandScheme& bands, const SpfTable& table, bool reinstate_y_condition,
              unsigned workers) {
  require_unit(a, q, "sigma1");
  if (r >= bands.band_count()) throw domain_error("sigma1: band index out of range");
  const u64 Y = sigma_y_limit(N, bands, r);
  if (Y == 0) return 0.0;
  const BandPrimeData d = band_prime_data(f, a, q, r, N, bands, table);
  const PhaseEval phase(q);
  const auto yv = coprime_y_inverses(q, Y);
  std::vector<int> mb;
  if (reinstate_y_condition) mb = min_band_array(Y, bands);

  std::vector<NeumaierReal> partials;
  over_y_blocks(yv, workers, [&](u64 y, u64 iy, NeumaierReal& acc) {
    if (reinstate_y_condition && mb[size_t(y)] >= 0 && mb[size_t(y)] <= int(r)) return;
    const u64 limit = N / y;
    auto pend = std::upper_bound(d.primes.begin(), d.primes.end(), limit);
    const size_t plim = size_t(pend - d.primes.begin());
    if (plim == 0) return;
    SumValue inner;
    for (size_t i = 0; i < plim; ++i) {
      const u64 j = q == 1 ? 0 : mul_mod(d.c[i], iy, q);
      inner.add(d.fvals[i] * phase(j));
    }
    acc.add(inner.abs());
  }, partials);

  NeumaierReal total;
  for (const NeumaierReal& p : partials) total.add(p.value());
  return total.value();
}

Sigma2 sigma2(const MultiplicativeFunction& f, i64 a, u64 q, size_t r, u64 N,
              const BandScheme& bands, const SpfTable& table, unsigned workers) {
  require_unit(a, q, "sigma2");
  if (r >= bands.band_count()) throw domain_error("sigma2: band index out of range");
  Sigma2 out;
  out.y_limit = sigma_y_limit(N, bands, r);
  const u64 Y = out.y_limit;
  if (Y == 0) return out;
  const BandPrimeData d = band_prime_data(f, a, q, r, N, bands, table);
  const PhaseEval phase(q);
  const auto yv = coprime_y_inverses(q, Y);

  // direct: sum_y |inner|^2, y-block parallel
  {
    std::vector<NeumaierReal> partials;
    over_y_blocks(yv, workers, [&](u64 y, u64 iy, NeumaierReal& acc) {
      const u64 limit = N / y;
      auto pend = std::upper_bound(d.primes.begin(), d.primes.end(), limit);
      const size_t plim = size_t(pend - d.primes.begin());
      if (plim == 0) return;
      SumValue inner;
      for (size_t i = 0; i < plim; ++i) {
        const u64 j = q == 1 ? 0 : mul_mod(d.c[i], iy, q);
        inner.add(d.fvals[i] * phase(j));
      }
      const double m = inner.abs();
      acc.add(m * m);
    }, partials);
    NeumaierReal total;
    for (const NeumaierReal& p : partials) total.add(p.value());
    out.direct = total.value();
  }

  // pair expansion: ordered prime pairs (diagonal included), inner y-sum up to
  // min(Y, N / max(p1, p2)); parallel over p1 rows, merged in row order.
  {
    const size_t m = d.primes.size();
    std::vector<SumValue> rows(m);
    parallel_blocks(m, workers, [&](size_t i1) {
      SumValue& row = rows[i1];
      for (size_t i2 = 0; i2 < m; ++i2) {
        const u64 pmax = std::max(d.primes[i1], d.primes[i2]);
        const u64 L = std::min(Y, N / pmax);
        const u64 diff = q == 1 ? 0 : (d.c[i1] + q - d.c[i2]) % q;  // a(p1bar - p2bar) mod q
        SumValue ysum;
        for (const auto& [y, iy] : yv) {
          if (y > L) break;
          const u64 j = q == 1 ? 0 : mul_mod(diff, iy, q);
          ysum.add(phase(j));
        }
        row.add(d.fvals[i1] * std::conj(d.fvals[i2]) * ysum.value());
      }
    });
    SumValue acc;
    for (const SumValue& row : rows) acc.merge(row);
    out.pair_expanded = acc.value();
  }
  return out;
}

}  // namespace klsum
