#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace heightkit {

// Working precision for all floating evaluation: x87 extended, 64-bit mantissa.
using Real = long double;
using Complex = std::complex<Real>;

using BigInt = mpz_class;
using Rat = mpq_class;

using IntVector = std::vector<std::int64_t>;
using BigIntVector = std::vector<BigInt>;
using RatVector = std::vector<Rat>;
using RealVector = std::vector<Real>;

inline constexpr int kWorkingPrecisionBits = 64;

Real to_real(const BigInt& x);
Real to_real(const Rat& x);

/// Exact rational value of a finite long double.
Rat rat_from_real(Real x);

/// Parses "p", "-p/q" or a decimal like "1.25" / "1e-3" into an exact rational.
Rat parse_rat(const std::string& text);

/// Canonical "p/q" (or "p" when q = 1).
std::string format_rat(const Rat& x);

/// Prints with an explicit digit count, e.g. "1.0864348112133080146".
std::string format_real(Real x, int digits = 19);

/// Exact integer power of a rational; negative exponents invert.
Rat rat_pow(const Rat& base, long exponent);

/// Rational square root when x is a square of a rational.
std::optional<Rat> exact_sqrt(const Rat& x);

/// A positive real with its exact rational value when one is known.
struct ExactReal {
  Real value = 0;
  std::optional<Rat> exact;

  static ExactReal from_rat(const Rat& r) { return {to_real(r), r}; }
  static ExactReal from_real(Real v) { return {v, std::nullopt}; }
};

/// Sum of floating terms, rounded once at the end. Accumulation is exact, so the
/// result does not depend on how the terms are grouped or ordered.
class ExactSum {
 public:
  void add(Real term) { acc_ += rat_from_real(term); }
  void add(Real term, const BigInt& multiplicity) { acc_ += rat_from_real(term) * multiplicity; }
  void add(const ExactSum& other) { acc_ += other.acc_; }
  Real value() const { return to_real(acc_); }
  const Rat& exact() const { return acc_; }

 private:
  Rat acc_ = 0;
};

}  // namespace heightkit
