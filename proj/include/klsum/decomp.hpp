#pragma once

#include <string>
#include <vector>

#include "klsum/expsum.hpp"

namespace klsum {

// ---------------------------------------------------------------------------
// Scale parameters and prime bands
// ---------------------------------------------------------------------------

// d0 = sqrt(loglog 6N), D0 = e^{d0}, d1 = d0^2, D1 = log 6N. The usable band
// index range is r_lo = floor(d0)+1 .. r_hi = floor(d1)-1; it is empty for
// every desk-scale N (loglog growth), which is flagged, not an error.
struct PaperParams {
  double n = 0;
  double d0 = 0, D0 = 0, d1 = 0, D1 = 0;
  int r_lo = 0, r_hi = -1;
  bool empty() const { return r_lo > r_hi; }
};

PaperParams paper_params(double N);

struct BandScheme {
  enum class Provenance { PaperDefault, Custom };

  std::vector<u64> boundaries;  // strictly increasing; size <= 1 means no bands
  Provenance provenance = Provenance::Custom;
  int r_base = 0;  // paper band index of band 0 (PaperDefault schemes)

  size_t band_count() const { return boundaries.size() < 2 ? 0 : boundaries.size() - 1; }
  bool empty() const { return band_count() == 0; }
  u64 lower(size_t r) const { return boundaries[r]; }
  u64 upper(size_t r) const { return boundaries[r + 1]; }
  u64 window_lo() const { return boundaries.empty() ? 0 : boundaries.front(); }
  u64 window_hi() const { return boundaries.empty() ? 0 : boundaries.back(); }

  // Band index containing p, or -1 when p lies outside every band.
  int band_of(u64 p) const;

  // "8-21-55", "paper[3-8-21]", "paper[empty]", "custom[10]" (degenerate)
  std::string descriptor() const;
};

// Paper-default bands B_r = ceil(e^r), r = r_lo .. r_hi+1.
BandScheme make_bands_paper(double N);
// Custom boundaries: strictly increasing, B_0 >= 2; a single boundary gives
// the degenerate empty scheme.
BandScheme make_bands_custom(std::vector<u64> boundaries);

// ---------------------------------------------------------------------------
// Classification of integers against a band scheme
// ---------------------------------------------------------------------------

enum class Verdict { Rough, Clean, Discard };

struct Classification {
  Verdict verdict = Verdict::Rough;
  int band = -1;       // Clean: the band index r
  u64 band_prime = 0;  // Clean: the unique band prime p with p || n
  u64 n = 0;
};

// Rough: no prime factor in the window. Clean(r, p): the lowest band meeting
// a prime factor of n is r, and the total multiplicity of band-r primes in n
// is exactly one. Discard: everything else that meets the window.
Classification classify(u64 n, const BandScheme& bands, const SpfTable& table);

// The unique factorization n = p*y of a Clean integer.
std::pair<u64, u64> split(u64 n, const BandScheme& bands, const SpfTable& table);

// ---------------------------------------------------------------------------
// Rough-number counting and the lemma1 bound
// ---------------------------------------------------------------------------

struct RoughCount {
  u64 count = 0;          // exact #{n <= N : no prime factor in the window}
  double lemma1_bound = 0;  // N / sqrt(loglog 6N)
};

RoughCount rough_count(u64 N, const BandScheme& bands);

struct MertensProduct {
  double product = 1;  // prod_{D0 <= p < D1} (1 - 1/p)
  double approx = 1;   // log D0 / log D1
};

MertensProduct mertens_product(double D0, double D1);

struct BandPrimeCount {
  u64 count = 0;
  double pnt_ratio = 0;  // count * r / e^r (paper) or count / ((B1-B0)/log B0)
};

BandPrimeCount band_prime_count(const BandScheme& bands, size_t r);

// Sizes of the discard layers around S''' for paper-default parameters:
// S = window [ceil(D0), ceil(D1)), S' = bands [d0]..[d1], S'' = bands
// [d0]+1..[d1]-1, S''' = exact-one-prime members of S''. The table is only
// consulted when the paper-default scheme is non-empty (never at desk scale).
struct DiscardSizes {
  u64 s = 0, s1 = 0, s2 = 0, s3 = 0;
  u64 s_minus_s2 = 0;
  u64 s2_minus_s3 = 0;
  double lemma1_bound = 0;
};

DiscardSizes discard_sizes(u64 N, const SpfTable* table = nullptr);

// ---------------------------------------------------------------------------
// The exact decomposition and the band rearrangement
// ---------------------------------------------------------------------------

struct PartitionCounts {
  u64 rough = 0, clean = 0, discard = 0;
};

// Counts verdicts over all n <= N (no coprimality filter).
PartitionCounts partition_counts(u64 N, const BandScheme& bands, const SpfTable& table);

// min_band[n] = lowest band index meeting a prime factor of n, or -1.
std::vector<int> min_band_array(u64 N, const BandScheme& bands);

struct Decomposition {
  SumValue clean, rough, discard;
  SumValue rearranged_clean;  // the (band, prime, cofactor) double sum; equals clean exactly
};

Decomposition decomposed_sum(const MultiplicativeFunction& f, i64 a, u64 q, u64 N,
                             const BandScheme& bands, const SpfTable& table,
                             unsigned workers = 1);

// ---------------------------------------------------------------------------
// Sigma_1 and Sigma_2
// ---------------------------------------------------------------------------

// Y = N / B_r, the integerized y-range limit.
u64 sigma_y_limit(u64 N, const BandScheme& bands, size_t r);

// Sigma_1 = sum_{y<=Y,(y,q)=1} | sum_{p in P_r, p<=N/y, (p,q)=1} f(p) e(a pbar ybar / q) |.
// reinstate_y_condition additionally requires y free of bands 0..r (the
// restricted sum Sigma_1 dominates by the triangle inequality). Parallelizes over y-blocks
// with partials merged in block order (worker-count independent bits).
double sigma1(const MultiplicativeFunction& f, i64 a, u64 q, size_t r, u64 N,
              const BandScheme& bands, const SpfTable& table,
              bool reinstate_y_condition = false, unsigned workers = 1);

struct Sigma2 {
  double direct = 0;    // sum_y |inner|^2
  cplx pair_expanded;   // the reordered double-prime expansion of sum_y |inner|^2
  u64 y_limit = 0;
};

Sigma2 sigma2(const MultiplicativeFunction& f, i64 a, u64 q, size_t r, u64 N,
              const BandScheme& bands, const SpfTable& table, unsigned workers = 1);

}  // namespace klsum
