#include "heightkit/numeric.hpp"

#include <cmath>
#include <cstdio>

#include "heightkit/errors.hpp"

namespace heightkit {

namespace {

// Top 64 bits of |x| as an integer mantissa plus the binary shift dropped.
std::pair<std::uint64_t, long> top_bits(const BigInt& x) {
  mpz_class a = abs(x);
  const long bits = static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 2));
  long shift = bits > 64 ? bits - 64 : 0;
  if (shift > 0) mpz_tdiv_q_2exp(a.get_mpz_t(), a.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
  static_assert(sizeof(unsigned long) == 8, "64-bit limbs expected");
  return {mpz_get_ui(a.get_mpz_t()), shift};
}

}  // namespace

Real to_real(const BigInt& x) {
  if (sgn(x) == 0) return 0;
  auto [mant, shift] = top_bits(x);
  Real v = std::ldexp(static_cast<Real>(mant), static_cast<int>(shift));
  return sgn(x) < 0 ? -v : v;
}

Real to_real(const Rat& x) {
  if (sgn(x) == 0) return 0;
  auto [nm, ns] = top_bits(x.get_num());
  auto [dm, ds] = top_bits(x.get_den());
  Real v = std::ldexp(static_cast<Real>(nm) / static_cast<Real>(dm), static_cast<int>(ns - ds));
  return sgn(x) < 0 ? -v : v;
}

Rat rat_from_real(Real x) {
  if (!std::isfinite(x)) throw ValidationError("non-finite value has no rational form");
  if (x == 0) return Rat(0);
  int exp = 0;
  Real frac = std::frexp(std::fabs(x), &exp);  // frac in [1/2, 1)
  auto mant = static_cast<std::uint64_t>(std::ldexp(frac, 64));
  mpz_class m;
  mpz_set_ui(m.get_mpz_t(), mant);
  Rat r(m);
  const long e = static_cast<long>(exp) - 64;
  if (e >= 0)
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  r.canonicalize();
  return x < 0 ? Rat(-r) : r;
}

Rat parse_rat(const std::string& text) {
  if (text.empty()) throw ValidationError("empty rational");
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      Rat r(BigInt(text.substr(0, slash), 10), BigInt(text.substr(slash + 1), 10));
      if (sgn(r.get_den()) == 0) throw ValidationError("zero denominator in '" + text + "'");
      r.canonicalize();
      return r;
    }
    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
    std::string digits;
    long scale = 0;
    bool seen_point = false;
    for (; pos < text.size(); ++pos) {
      const char c = text[pos];
      if (c >= '0' && c <= '9') {
        digits.push_back(c);
        if (seen_point) --scale;
      } else if (c == '.' && !seen_point) {
        seen_point = true;
      } else {
        break;
      }
    }
    if (digits.empty()) throw ValidationError("not a number: '" + text + "'");
    if (pos < text.size()) {
      if (text[pos] != 'e' && text[pos] != 'E') throw ValidationError("not a number: '" + text + "'");
      const std::string e = text.substr(pos + 1);
      if (e.empty()) throw ValidationError("not a number: '" + text + "'");
      std::size_t used = 0;
      scale += std::stol(e, &used);
      if (used != e.size()) throw ValidationError("not a number: '" + text + "'");
    }
    Rat r{BigInt(digits, 10)};
    BigInt ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    if (scale >= 0)
      r *= ten_pow;
    else
      r /= ten_pow;
    r.canonicalize();
    return negative ? Rat(-r) : r;
  } catch (const std::invalid_argument&) {
    throw ValidationError("not a rational: '" + text + "'");
  } catch (const std::out_of_range&) {
    throw ValidationError("exponent out of range: '" + text + "'");
  }
}

std::string format_rat(const Rat& x) { return x.get_str(); }

std::string format_real(Real x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*Lg", digits, x);
  return buf;
}

Rat rat_pow(const Rat& base, long exponent) {
  if (exponent < 0) {
    if (sgn(base) == 0) throw ValidationError("zero to a negative power");
    return rat_pow(Rat(1) / base, -exponent);
  }
  Rat r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  r.canonicalize();
  return r;
}

std::optional<Rat> exact_sqrt(const Rat& x) {
  if (sgn(x) < 0) return std::nullopt;
  if (!mpz_perfect_square_p(x.get_num_mpz_t()) || !mpz_perfect_square_p(x.get_den_mpz_t()))
    return std::nullopt;
  Rat r;
  mpz_sqrt(r.get_num_mpz_t(), x.get_num_mpz_t());
  mpz_sqrt(r.get_den_mpz_t(), x.get_den_mpz_t());
  r.canonicalize();
  return r;
}

}  // namespace heightkit
