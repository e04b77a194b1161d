#pragma once

// Shared internals of the summation kernels; not part of the public surface.

#include <cstdint>
#include <string>
#include <vector>

#include "klsum/arith.hpp"

namespace klsum::internal {

// Coprimality test against q, backed by a residue mask mod rad(q) when the
// radical is small (throughput on scans), else per-n gcd.
struct CoprimeFilter {
  u64 q = 1;
  u64 rad = 1;
  bool use_mask = false;
  std::vector<std::uint8_t> mask;

  explicit CoprimeFilter(u64 q_) : q(q_) {
    if (q <= 1) return;
    Factorization f = factorize(q);
    rad = 1;
    for (auto [p, e] : f.pairs) rad *= p;
    if (rad <= 1'000'000) {
      use_mask = true;
      mask.assign(size_t(rad), 1);
      for (auto [p, e] : f.pairs)
        for (u64 r = 0; r < rad; r += p) mask[size_t(r)] = 0;
    }
  }

  bool operator()(u64 n) const {
    if (q == 1) return true;
    if (use_mask) return mask[size_t(n % rad)] != 0;
    return gcd_u64(n % q, q) == 1;
  }
};

// e(j/q) through a dense table when q is small enough, else direct.
struct PhaseEval {
  u64 q;
  UnitCircleTable table;
  bool have_table = false;

  explicit PhaseEval(u64 q_) : q(q_) {
    if (q >= 2 && q <= unit_table_threshold()) {
      table = build_unit_table(q);
      have_table = true;
    }
  }

  cplx operator()(u64 j) const {
    return have_table ? table.values[size_t(j)] : e_frac_reduced(j, q);
  }
};

inline u64 reduce_mod(i64 a, u64 q) { return u64(((a % i64(q)) + i64(q)) % i64(q)); }

inline void require_unit(i64 a, u64 q, const char* who) {
  if (q < 1) throw domain_error(std::string(who) + ": q must be >= 1");
  if (q > kModulusMax) throw domain_error(std::string(who) + ": q exceeds 2^62-1 support limit");
  u64 g = gcd_twist(a, q);
  if (g != 1) {
    throw domain_error(std::string(who) + ": gcd(a, q) = " + std::to_string(g) + " != 1");
  }
}

// Compensated accumulation for nonnegative / signed doubles.
struct NeumaierReal {
  double s = 0, c = 0;
  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

}  // namespace klsum::internal
