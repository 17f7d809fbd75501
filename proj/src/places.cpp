#include "heightkit/places.hpp"

#include <algorithm>
#include <array>

#include "heightkit/errors.hpp"

namespace heightkit {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 a, u64 e, u64 m) {
  u64 r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

// The first twelve primes form a proven witness set for every n < 3.18 * 10^23.
constexpr std::array<u64, 12> kWitnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

BigInt pollard_brent(const BigInt& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    BigInt y = 2, x, g = 1, q = 1, ys;
    const unsigned long m = 128;
    unsigned long r = 1;
    auto f = [&](const BigInt& v) {
      BigInt t = v * v + c;
      mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      return t;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = q * abs(x - y);
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        BigInt d = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(const BigInt& n, std::vector<BigInt>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  BigInt d = pollard_brent(n);
  factor_into(d, out);
  factor_into(BigInt(n / d), out);
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 p : kWitnesses) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : kWitnesses) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
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

bool is_prime(const BigInt& n) {
  if (sgn(n) <= 0) return false;
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) return is_prime(static_cast<std::uint64_t>(mpz_get_ui(n.get_mpz_t())));
  // GMP >= 6.2 runs Baillie-PSW first; no BPSW pseudoprime is known.
  return mpz_probab_prime_p(n.get_mpz_t(), 25) != 0;
}

Place Place::finite(const BigInt& p) {
  if (!is_prime(p)) throw ValidationError("place " + p.get_str() + " is not prime");
  Place v;
  v.prime_ = p;
  return v;
}

std::string Place::to_string() const { return is_infinite() ? "inf" : prime_->get_str(); }

bool operator<(const Place& a, const Place& b) {
  if (a.is_infinite()) return b.is_finite();
  if (b.is_infinite()) return false;
  return a.prime() < b.prime();
}

Factorization factorize(const BigInt& n_in) {
  if (sgn(n_in) == 0) throw ValidationError("cannot factor zero");
  BigInt n = abs(n_in);
  std::vector<BigInt> primes;
  for (unsigned long p = 2; p < 10000 && n > 1; p += (p == 2 ? 1 : 2)) {
    if (BigInt(p) * p > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      primes.emplace_back(p);
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    }
  }
  if (n > 1) factor_into(n, primes);
  std::sort(primes.begin(), primes.end());
  Factorization out;
  for (const auto& p : primes) {
    if (!out.empty() && out.back().first == p)
      ++out.back().second;
    else
      out.emplace_back(p, 1u);
  }
  return out;
}

long ord_p(const Rat& x, const BigInt& p) {
  if (sgn(x) == 0) throw ValidationError("ord_p of zero");
  BigInt tmp;
  const long up = static_cast<long>(mpz_remove(tmp.get_mpz_t(), x.get_num_mpz_t(), p.get_mpz_t()));
  const long down = static_cast<long>(mpz_remove(tmp.get_mpz_t(), x.get_den_mpz_t(), p.get_mpz_t()));
  return up - down;
}

Rat abs_p(const Rat& x, const BigInt& p) {
  if (sgn(x) == 0) return Rat(0);
  return rat_pow(Rat(p), -ord_p(x, p));
}

Rat abs_v(const Rat& x, const Place& v) { return v.is_infinite() ? Rat(abs(x)) : abs_p(x, v.prime()); }

std::vector<BigInt> support(const Rat& x) {
  std::vector<BigInt> out;
  if (sgn(x) == 0) throw ValidationError("support of zero");
  for (const auto& [p, e] : factorize(x.get_num())) out.push_back(p);
  for (const auto& [p, e] : factorize(x.get_den())) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

Rat product_formula_check(const Rat& x) {
  if (sgn(x) == 0) throw ValidationError("product formula needs x != 0");
  Rat prod = abs_v(x, Place::infinite());
  for (const auto& p : support(x)) prod *= abs_p(x, p);
  return prod;
}

std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) throw ValidationError("euler_phi(0) is undefined");
  BigInt big;
  mpz_set_ui(big.get_mpz_t(), n);
  return mpz_get_ui(euler_phi(big).get_mpz_t());
}

BigInt euler_phi(const BigInt& n) {
  if (sgn(n) <= 0) throw ValidationError("euler_phi needs n >= 1");
  BigInt phi = 1;
  for (const auto& [p, e] : factorize(n)) {
    BigInt pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e - 1);
    phi *= pe * (p - 1);
  }
  return phi;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

}  // namespace heightkit
