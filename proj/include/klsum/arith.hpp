#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "klsum/errors.hpp"

namespace klsum {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using cplx = std::complex<double>;

// Largest modulus the modular kernels accept (double-width products stay in
// unsigned __int128).
inline constexpr u64 kModulusMax = (u64(1) << 62) - 1;

// Memory cap for build_spf_table, in table entries. Overridable with the
// KLSUM_SIEVE_CAP environment variable.
inline constexpr u64 kDefaultSieveCap = 200'000'000;
u64 sieve_cap();

// Upper limit for segmented prime enumeration.
inline constexpr u64 kPrimeRangeCap = u64(1) << 40;

// ---------------------------------------------------------------------------
// Scalar kernels
// ---------------------------------------------------------------------------

constexpr u64 gcd_u64(u64 a, u64 b) {
  while (b != 0) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// gcd normalized for twist arguments: gcd(0, q) = q.
u64 gcd_twist(i64 b, u64 q);

inline u64 mul_mod(u64 a, u64 b, u64 q) {
  return u64((unsigned __int128)a * b % q);
}

u64 pow_mod(u64 base, u64 exp, u64 q);

// Deterministic Miller-Rabin, valid for all n < 2^64.
bool is_prime_u64(u64 n);

// ---------------------------------------------------------------------------
// Smallest-prime-factor table (linear sieve)
// ---------------------------------------------------------------------------

struct SpfTable {
  u64 limit = 0;
  std::vector<u32> spf;  // spf[0] = spf[1] = 0 sentinels

  bool is_prime(u64 n) const { return n >= 2 && n <= limit && spf[size_t(n)] == n; }
};

SpfTable build_spf_table(u64 limit);

// ---------------------------------------------------------------------------
// Factorization and the classical arithmetic functions
// ---------------------------------------------------------------------------

struct Factorization {
  std::vector<std::pair<u64, int>> pairs;  // primes strictly increasing

  u64 value() const;
};

// Uses the table when n <= table->limit; otherwise trial division up to 10^4
// followed by Miller-Rabin + Pollard rho splitting (any n < 2^63).
Factorization factorize(u64 n, const SpfTable* table = nullptr);

struct ArithValues {
  u64 tau;
  u64 phi;
  int mu;  // in {-1, 0, 1}
};

ArithValues arithmetic_functions(u64 n, const SpfTable* table = nullptr);

u64 euler_phi(u64 n, const SpfTable* table = nullptr);
u64 divisor_count(u64 n, const SpfTable* table = nullptr);

// All divisors of n, ascending.
std::vector<u64> divisors(u64 n, const SpfTable* table = nullptr);

// Product of the distinct primes of n.
u64 radical(u64 n, const SpfTable* table = nullptr);

// ---------------------------------------------------------------------------
// Modular inverses
// ---------------------------------------------------------------------------

// Inverse of n mod q in [0, q); q = 1 returns 0. Throws domain_error carrying
// the gcd when gcd(n, q) != 1.
u64 mod_inverse(i64 n, u64 q);

// Elementwise mod_inverse with one extended gcd for the whole batch plus three
// modular multiplications per element (prefix-product trick). Throws
// domain_error naming the index of the first non-coprime entry.
std::vector<u64> batch_mod_inverse(std::span<const u64> ns, u64 q);

// In-place variant writing into out[i] (out.size() == ns.size()).
void batch_mod_inverse_into(std::span<const u64> ns, u64 q, std::span<u64> out);

// ---------------------------------------------------------------------------
// e(x) = exp(2*pi*i*x) on rationals j/q
// ---------------------------------------------------------------------------

// Dense tables are built for q up to this threshold (default 2^22, override
// with KLSUM_UNIT_TABLE_CAP); larger moduli evaluate per term.
inline constexpr u64 kDefaultUnitTableThreshold = u64(1) << 22;
u64 unit_table_threshold();

struct UnitCircleTable {
  u64 modulus = 0;
  std::vector<cplx> values;  // values[j] = e(j/modulus)
};

// Builds the full table of q roots; callers gate on unit_table_threshold().
UnitCircleTable build_unit_table(u64 q);

// e(j/q) with j reduced mod q. Table lookup when a table for this modulus is
// supplied, else direct evaluation with octant reduction (abs error stays
// within a few ulp of unity even for j/q near 1).
cplx e_frac(i64 j, u64 q, const UnitCircleTable* table = nullptr);

// Direct (non-table) evaluation on a residue already reduced into [0, q).
cplx e_frac_reduced(u64 r, u64 q);

// ---------------------------------------------------------------------------
// Prime enumeration
// ---------------------------------------------------------------------------

// Sorted primes p with lo <= p < hi, segmented so hi may exceed any SpfTable.
std::vector<u64> primes_in_range(u64 lo, u64 hi);

}  // namespace klsum
