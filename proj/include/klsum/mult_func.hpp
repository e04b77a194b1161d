#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "klsum/arith.hpp"

namespace klsum {

// A multiplicative function f with |f(n)| <= 1, defined by its values on
// prime powers. f(1) = 1 and f(mn) = f(m) f(n) for coprime m, n follow from
// the evaluation scheme. Rule values are validated (modulus <= 1 + 1e-12)
// every time they are produced, since user rules are opaque.
class MultiplicativeFunction {
 public:
  using Rule = std::function<cplx(u64 p, int k)>;

  static MultiplicativeFunction one();
  static MultiplicativeFunction mobius();
  static MultiplicativeFunction liouville();
  // f(n) = n^{i*alpha}, completely multiplicative, |f| = 1.
  static MultiplicativeFunction nit(double alpha);
  // f(p) = e(theta_p) with theta_p = unit_draw(seed, p, 1); completely
  // multiplicative unless per_prime_power, in which case f(p^k) draws
  // unit_draw(seed, p, k) independently.
  static MultiplicativeFunction random_unimodular(u64 seed, bool per_prime_power = false);
  static MultiplicativeFunction custom(std::string id, Rule rule, bool completely_multiplicative);

  // CLI naming grammar: one | mobius | liouville | nit:<alpha> | rand:<seed>
  static MultiplicativeFunction from_spec(std::string_view spec);

  const std::string& id() const { return id_; }
  bool completely_multiplicative() const { return completely_multiplicative_; }

  // f(p^k), validated; throws validation_error naming (p, k) on |value| > 1.
  cplx prime_power(u64 p, int k) const;

  // Same function with the conjugated rule.
  MultiplicativeFunction conjugated() const;

 private:
  MultiplicativeFunction(std::string id, Rule rule, bool cm)
      : id_(std::move(id)), rule_(std::move(rule)), completely_multiplicative_(cm) {}

  std::string id_;
  Rule rule_;
  bool completely_multiplicative_ = false;
};

// The deterministic draw behind random_unimodular: splitmix64 keyed by
// (seed, p, k), mapped to [0, 1). Exposed so tests can recompute draws.
double unit_draw(u64 seed, u64 p, int k);

// f(n) by factorization; table used when provided and n <= table->limit.
cplx eval_at(const MultiplicativeFunction& f, u64 n, const SpfTable* table = nullptr);

// Values f(1..N) in O(N) multiplications via the spf recursion. Entry 0 is 0.
std::vector<cplx> sieve_values(const MultiplicativeFunction& f, u64 N, const SpfTable& table);

}  // namespace klsum
