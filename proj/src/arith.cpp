#include "klsum/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace klsum {

u64 sieve_cap() {
  if (const char* env = std::getenv("KLSUM_SIEVE_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v >= 2) return std::min<u64>(v, 0xFFFFFFFFull);
  }
  return kDefaultSieveCap;
}

u64 unit_table_threshold() {
  if (const char* env = std::getenv("KLSUM_UNIT_TABLE_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v >= 1) return v;
  }
  return kDefaultUnitTableThreshold;
}

u64 gcd_twist(i64 b, u64 q) {
  if (q == 0) return u64(b < 0 ? -b : b);
  u64 r = u64(((b % i64(q)) + i64(q)) % i64(q));
  return r == 0 ? q : gcd_u64(r, q);
}

u64 pow_mod(u64 base, u64 exp, u64 q) {
  if (q == 1) return 0;
  u64 result = 1;
  base %= q;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, q);
    base = mul_mod(base, base, q);
    exp >>= 1;
  }
  return result;
}

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // deterministic witness set for all n < 2^64
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = pow_mod(a % n, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

SpfTable build_spf_table(u64 limit) {
  const u64 cap = sieve_cap();
  if (limit < 1) throw domain_error("build_spf_table: limit must be >= 1");
  if (limit > cap) {
    throw resource_error("build_spf_table: limit " + std::to_string(limit) +
                         " exceeds sieve cap " + std::to_string(cap) +
                         " (set KLSUM_SIEVE_CAP to raise)");
  }
  SpfTable t;
  t.limit = limit;
  t.spf.assign(size_t(limit) + 1, 0);
  std::vector<u32> primes;
  if (limit > 16) primes.reserve(size_t(double(limit) / std::log(double(limit)) * 1.2));
  for (u64 n = 2; n <= limit; ++n) {
    u32& s = t.spf[size_t(n)];
    if (s == 0) {
      s = u32(n);
      primes.push_back(u32(n));
    }
    for (u32 p : primes) {
      if (p > s || p > limit / n) break;
      t.spf[size_t(p * n)] = p;
    }
  }
  return t;
}

// ---------------------------------------------------------------------------

u64 Factorization::value() const {
  u64 v = 1;
  for (auto [p, e] : pairs)
    for (int i = 0; i < e; ++i) v *= p;
  return v;
}

namespace {

// Pollard rho with a varying offset; n odd composite with no factor <= 10^4.
u64 pollard_rho(u64 n) {
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1;
    auto step = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      u64 diff = x > y ? x - y : y - x;
      if (diff == 0) break;
      d = gcd_u64(diff, n);
    }
    if (d != 1 && d != n) return d;
  }
}

void factor_large(u64 n, std::vector<u64>& primes_out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    primes_out.push_back(n);
    return;
  }
  u64 d = pollard_rho(n);
  factor_large(d, primes_out);
  factor_large(n / d, primes_out);
}

}  // namespace

Factorization factorize(u64 n, const SpfTable* table) {
  if (n < 1) throw domain_error("factorize: n must be >= 1");
  Factorization f;
  if (n == 1) return f;
  if (table && n <= table->limit) {
    u64 m = n;
    while (m > 1) {
      u64 p = table->spf[size_t(m)];
      int e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      f.pairs.emplace_back(p, e);
    }
    std::sort(f.pairs.begin(), f.pairs.end());
    return f;
  }
  u64 m = n;
  for (u64 p = 2; p <= 10000 && p * p <= m; p = (p == 2 ? 3 : p + 2)) {
    if (m % p == 0) {
      int e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      f.pairs.emplace_back(p, e);
    }
  }
  if (m > 1) {
    std::vector<u64> big;
    factor_large(m, big);
    std::sort(big.begin(), big.end());
    for (u64 p : big) {
      if (!f.pairs.empty() && f.pairs.back().first == p)
        ++f.pairs.back().second;
      else
        f.pairs.emplace_back(p, 1);
    }
  }
  std::sort(f.pairs.begin(), f.pairs.end());
  return f;
}

ArithValues arithmetic_functions(u64 n, const SpfTable* table) {
  Factorization f = factorize(n, table);
  ArithValues v{1, n, 1};
  for (auto [p, e] : f.pairs) {
    v.tau *= u64(e) + 1;
    v.phi = v.phi / p * (p - 1);
    v.mu = (e >= 2) ? 0 : -v.mu;
  }
  return v;
}

u64 euler_phi(u64 n, const SpfTable* table) { return arithmetic_functions(n, table).phi; }

u64 divisor_count(u64 n, const SpfTable* table) { return arithmetic_functions(n, table).tau; }

std::vector<u64> divisors(u64 n, const SpfTable* table) {
  Factorization f = factorize(n, table);
  std::vector<u64> ds{1};
  for (auto [p, e] : f.pairs) {
    size_t base = ds.size();
    u64 pe = 1;
    for (int i = 1; i <= e; ++i) {
      pe *= p;
      for (size_t j = 0; j < base; ++j) ds.push_back(ds[j] * pe);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

u64 radical(u64 n, const SpfTable* table) {
  u64 r = 1;
  for (auto [p, e] : factorize(n, table).pairs) r *= p;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

// Extended gcd on (a, q) with a in [0, q); returns gcd and sets inv so that
// inv * a == gcd (mod q).
u64 ext_gcd_inverse(u64 a, u64 q, u64& inv) {
  i64 old_r = i64(a), r = i64(q);
  i64 old_s = 1, s = 0;
  while (r != 0) {
    i64 quot = old_r / r;
    i64 t = old_r - quot * r;
    old_r = r;
    r = t;
    t = old_s - quot * s;
    old_s = s;
    s = t;
  }
  i64 x = old_s % i64(q);
  if (x < 0) x += i64(q);
  inv = u64(x);
  return u64(old_r);
}

}  // namespace

u64 mod_inverse(i64 n, u64 q) {
  if (q < 1) throw domain_error("mod_inverse: q must be >= 1");
  if (q > kModulusMax) throw domain_error("mod_inverse: q exceeds 2^62-1 support limit");
  if (q == 1) return 0;
  u64 r = u64(((n % i64(q)) + i64(q)) % i64(q));
  u64 inv = 0;
  u64 g = ext_gcd_inverse(r, q, inv);
  if (g != 1) {
    throw domain_error("mod_inverse: gcd(n, q) = " + std::to_string(g) + " != 1");
  }
  return inv;
}

void batch_mod_inverse_into(std::span<const u64> ns, u64 q, std::span<u64> out) {
  if (q < 1) throw domain_error("batch_mod_inverse: q must be >= 1");
  if (q > kModulusMax) throw domain_error("batch_mod_inverse: q exceeds 2^62-1 support limit");
  if (out.size() != ns.size()) throw domain_error("batch_mod_inverse: output size mismatch");
  const size_t len = ns.size();
  if (len == 0) return;
  if (q == 1) {
    std::fill(out.begin(), out.end(), 0);
    return;
  }
  // forward prefix products, stored in out as scratch
  u64 acc = 1;
  for (size_t i = 0; i < len; ++i) {
    acc = mul_mod(acc, ns[i] % q, q);
    out[i] = acc;
  }
  u64 inv_acc = 0;
  u64 g = ext_gcd_inverse(acc, q, inv_acc);
  if (g != 1) {
    // locate the first offender for the error message
    for (size_t i = 0; i < len; ++i) {
      if (gcd_u64(ns[i] % q, q) != 1) {
        throw domain_error("batch_mod_inverse: entry at index " + std::to_string(i) +
                           " not coprime to q");
      }
    }
    throw domain_error("batch_mod_inverse: non-coprime batch");
  }
  // backward sweep: inv(n_i) = inv(prefix_i) * prefix_{i-1}
  for (size_t i = len; i-- > 1;) {
    u64 val = ns[i] % q;
    out[i] = mul_mod(inv_acc, out[i - 1], q);
    inv_acc = mul_mod(inv_acc, val, q);
  }
  out[0] = inv_acc;
}

std::vector<u64> batch_mod_inverse(std::span<const u64> ns, u64 q) {
  std::vector<u64> out(ns.size());
  batch_mod_inverse_into(ns, q, out);
  return out;
}

// ---------------------------------------------------------------------------

cplx e_frac_reduced(u64 r, u64 q) {
  if (r == 0 || q == 1) return cplx(1.0, 0.0);
  // Reduce to the first octant: e(r/q) = i^k * e(w/4q) with w/4q < 1/4, and
  // when w/q > 1/2 use e(w/4q) = i * conj(e((q-w)/4q)). The trig argument
  // stays below pi/4, so the result is accurate to a few ulp of unity.
  unsigned __int128 r4 = (unsigned __int128)r * 4;
  unsigned k = unsigned(r4 / q);  // 0..3
  u64 w = u64(r4 - (unsigned __int128)k * q);
  cplx z;
  if (2 * w > q) {
    double x = double(q - w) / (4.0 * double(q));
    double theta = 2.0 * std::numbers::pi * x;
    cplx base(std::cos(theta), std::sin(theta));
    z = cplx(base.imag(), base.real());  // i * conj(base)
  } else {
    double x = double(w) / (4.0 * double(q));
    double theta = 2.0 * std::numbers::pi * x;
    z = cplx(std::cos(theta), std::sin(theta));
  }
  switch (k & 3) {
    case 0: return z;
    case 1: return cplx(-z.imag(), z.real());
    case 2: return cplx(-z.real(), -z.imag());
    default: return cplx(z.imag(), -z.real());
  }
}

cplx e_frac(i64 j, u64 q, const UnitCircleTable* table) {
  if (q < 1) throw domain_error("e_frac: q must be >= 1");
  u64 r = u64(((j % i64(q)) + i64(q)) % i64(q));
  if (table && table->modulus == q) return table->values[size_t(r)];
  return e_frac_reduced(r, q);
}

UnitCircleTable build_unit_table(u64 q) {
  if (q < 1) throw domain_error("build_unit_table: q must be >= 1");
  if (q > unit_table_threshold())
    throw resource_error("build_unit_table: q " + std::to_string(q) + " exceeds table threshold " +
                         std::to_string(unit_table_threshold()));
  UnitCircleTable t;
  t.modulus = q;
  t.values.resize(size_t(q));
  for (u64 j = 0; j < q; ++j) t.values[size_t(j)] = e_frac_reduced(j, q);
  return t;
}

// ---------------------------------------------------------------------------

std::vector<u64> primes_in_range(u64 lo, u64 hi) {
  if (hi > kPrimeRangeCap) {
    throw resource_error("primes_in_range: hi " + std::to_string(hi) +
                         " exceeds prime range cap " + std::to_string(kPrimeRangeCap));
  }
  std::vector<u64> out;
  if (hi <= 2 || hi <= lo) return out;
  lo = std::max<u64>(lo, 2);

  u64 root = u64(std::sqrt(double(hi))) + 2;
  while (root > 2 && root * root >= hi) --root;  // root = max r with r^2 < hi
  std::vector<u64> base;
  {
    std::vector<bool> comp(size_t(root) + 1, false);
    for (u64 p = 2; p <= root; ++p) {
      if (!comp[size_t(p)]) {
        base.push_back(p);
        for (u64 m = p * p; m <= root; m += p) comp[size_t(m)] = true;
      }
    }
  }

  constexpr u64 kSeg = u64(1) << 20;
  std::vector<bool> seg;
  for (u64 start = lo; start < hi; start += kSeg) {
    u64 end = std::min(hi, start + kSeg);
    seg.assign(size_t(end - start), false);
    for (u64 p : base) {
      if (p * p >= end) break;
      u64 first = std::max(p * p, (start + p - 1) / p * p);
      for (u64 m = first; m < end; m += p) seg[size_t(m - start)] = true;
    }
    for (u64 n = start; n < end; ++n) {
      if (!seg[size_t(n - start)]) out.push_back(n);
    }
  }
  return out;
}

}  // namespace klsum
