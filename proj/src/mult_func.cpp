#include "klsum/mult_func.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace klsum {

namespace {

constexpr double kModulusTol = 1e-12;

u64 splitmix64(u64 x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

double unit_draw(u64 seed, u64 p, int k) {
  u64 h = splitmix64(splitmix64(seed) ^ p * 0x9E3779B97F4A7C15ull ^ (u64(u32(k)) << 32));
  return double(h >> 11) * 0x1.0p-53;
}

MultiplicativeFunction MultiplicativeFunction::one() {
  return {"one", [](u64, int) { return cplx(1.0, 0.0); }, true};
}

MultiplicativeFunction MultiplicativeFunction::mobius() {
  return {"mobius", [](u64, int k) { return cplx(k == 1 ? -1.0 : 0.0, 0.0); }, false};
}

MultiplicativeFunction MultiplicativeFunction::liouville() {
  return {"liouville", [](u64, int k) { return cplx(k % 2 ? -1.0 : 1.0, 0.0); }, true};
}

MultiplicativeFunction MultiplicativeFunction::nit(double alpha) {
  std::string id = "nit:" + std::to_string(alpha);
  return {std::move(id),
          [alpha](u64 p, int k) {
            double theta = alpha * double(k) * std::log(double(p));
            return cplx(std::cos(theta), std::sin(theta));
          },
          true};
}

MultiplicativeFunction MultiplicativeFunction::random_unimodular(u64 seed, bool per_prime_power) {
  std::string id = "rand:" + std::to_string(seed);
  if (per_prime_power) {
    return {id + ":pp",
            [seed](u64 p, int k) {
              double theta = 2.0 * std::numbers::pi * unit_draw(seed, p, k);
              return cplx(std::cos(theta), std::sin(theta));
            },
            false};
  }
  return {std::move(id),
          [seed](u64 p, int k) {
            double theta = 2.0 * std::numbers::pi * double(k) * unit_draw(seed, p, 1);
            return cplx(std::cos(theta), std::sin(theta));
          },
          true};
}

MultiplicativeFunction MultiplicativeFunction::custom(std::string id, Rule rule,
                                                      bool completely_multiplicative) {
  return {std::move(id), std::move(rule), completely_multiplicative};
}

MultiplicativeFunction MultiplicativeFunction::from_spec(std::string_view spec) {
  if (spec == "one") return one();
  if (spec == "mobius") return mobius();
  if (spec == "liouville") return liouville();
  if (spec.rfind("nit:", 0) == 0) {
    std::string arg(spec.substr(4));
    try {
      size_t pos = 0;
      double alpha = std::stod(arg, &pos);
      if (pos == arg.size()) return nit(alpha);
    } catch (...) {
    }
    throw config_error("bad nit:<alpha> spec: " + std::string(spec));
  }
  if (spec.rfind("rand:", 0) == 0) {
    std::string_view arg = spec.substr(5);
    u64 seed = 0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), seed);
    if (ec == std::errc() && ptr == arg.data() + arg.size()) return random_unimodular(seed);
    throw config_error("bad rand:<seed> spec: " + std::string(spec));
  }
  throw config_error("unknown multiplicative function: " + std::string(spec));
}

cplx MultiplicativeFunction::prime_power(u64 p, int k) const {
  cplx v = rule_(p, k);
  if (std::abs(v) > 1.0 + kModulusTol) {
    throw validation_error("rule value for (p=" + std::to_string(p) + ", k=" + std::to_string(k) +
                           ") has modulus " + std::to_string(std::abs(v)) + " > 1");
  }
  return v;
}

MultiplicativeFunction MultiplicativeFunction::conjugated() const {
  Rule base = rule_;
  return {id_ + "~", [base](u64 p, int k) { return std::conj(base(p, k)); },
          completely_multiplicative_};
}

cplx eval_at(const MultiplicativeFunction& f, u64 n, const SpfTable* table) {
  if (n < 1) throw domain_error("eval_at: n must be >= 1");
  cplx v(1.0, 0.0);
  for (auto [p, e] : factorize(n, table).pairs) v *= f.prime_power(p, e);
  return v;
}

std::vector<cplx> sieve_values(const MultiplicativeFunction& f, u64 N, const SpfTable& table) {
  if (N > table.limit) {
    throw resource_error("sieve_values: N " + std::to_string(N) + " exceeds table limit " +
                         std::to_string(table.limit));
  }
  std::vector<cplx> vals(size_t(N) + 1, cplx(0.0, 0.0));
  if (N >= 1) vals[1] = cplx(1.0, 0.0);
  if (N < 2) return vals;
  // pk[n] = p^k with p = spf[n] and p^k || n; kexp[n] = k
  std::vector<u32> pk(size_t(N) + 1, 0);
  std::vector<std::uint8_t> kexp(size_t(N) + 1, 0);
  for (u64 n = 2; n <= N; ++n) {
    u32 p = table.spf[size_t(n)];
    u64 m = n / p;
    if (m > 1 && table.spf[size_t(m)] == p) {
      pk[size_t(n)] = pk[size_t(m)] * p;
      kexp[size_t(n)] = kexp[size_t(m)] + 1;
    } else {
      pk[size_t(n)] = p;
      kexp[size_t(n)] = 1;
    }
    if (pk[size_t(n)] == n) {
      vals[size_t(n)] = f.prime_power(p, kexp[size_t(n)]);
    } else {
      vals[size_t(n)] = vals[size_t(n / pk[size_t(n)])] * vals[size_t(pk[size_t(n)])];
    }
  }
  return vals;
}

}  // namespace klsum
