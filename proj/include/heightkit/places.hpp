#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heightkit/numeric.hpp"

namespace heightkit {

/// A place of Q: the archimedean one, or a prime p.
class Place {
 public:
  static Place infinite() { return Place(); }
  /// Throws ValidationError unless p is prime.
  static Place finite(const BigInt& p);

  bool is_infinite() const { return !prime_.has_value(); }
  bool is_finite() const { return prime_.has_value(); }
  /// Precondition: is_finite().
  const BigInt& prime() const { return *prime_; }

  std::string to_string() const;

  friend bool operator==(const Place& a, const Place& b) { return a.prime_ == b.prime_; }
  /// Infinity sorts first, then primes ascending.
  friend bool operator<(const Place& a, const Place& b);

 private:
  Place() = default;
  std::optional<BigInt> prime_;
};

/// Deterministic Miller-Rabin below 2^64; BPSW above.
bool is_prime(const BigInt& n);
bool is_prime(std::uint64_t n);

using Factorization = std::vector<std::pair<BigInt, unsigned>>;

/// Prime factorization of |n| (n != 0), primes ascending. Trial division then Pollard rho.
Factorization factorize(const BigInt& n);

/// Exponent of p in x (x != 0).
long ord_p(const Rat& x, const BigInt& p);

/// |x|_p = p^(-ord_p x), exactly; 0 for x = 0.
Rat abs_p(const Rat& x, const BigInt& p);

/// |x|_v. Both the archimedean and the p-adic value of a rational are rational.
Rat abs_v(const Rat& x, const Place& v);

/// Primes dividing the numerator or denominator of x.
std::vector<BigInt> support(const Rat& x);

/// Product of |x|_v over the support of x together with infinity. Exactly 1.
Rat product_formula_check(const Rat& x);

std::uint64_t euler_phi(std::uint64_t n);
BigInt euler_phi(const BigInt& n);

/// Primes p <= limit by sieve.
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

}  // namespace heightkit
