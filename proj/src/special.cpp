#include "heightkit/special.hpp"

#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

namespace heightkit::special {

namespace {

constexpr Real kTiny = std::numeric_limits<Real>::min() / std::numeric_limits<Real>::epsilon();
constexpr Real kEps = std::numeric_limits<Real>::epsilon();
constexpr Real kHalfLog2Pi = 0.918938533204672741780329736405617640L;

// B_{2k} / (2k (2k-1)), k = 1..10
constexpr std::array<Real, 10> kStirling = {
    1.0L / 12.0L,           -1.0L / 360.0L,           1.0L / 1260.0L,          -1.0L / 1680.0L,
    1.0L / 1188.0L,         -691.0L / 360360.0L,      1.0L / 156.0L,           -3617.0L / 122400.0L,
    43867.0L / 244188.0L,   -174611.0L / 125400.0L};

Complex stirling(Complex w) {
  Complex sum = 0;
  const Complex inv = Real(1) / w;
  const Complex inv2 = inv * inv;
  Complex p = inv;
  for (Real c : kStirling) {
    sum += c * p;
    p *= inv2;
  }
  return (w - Real(0.5)) * std::log(w) - w + kHalfLog2Pi + sum;
}

bool is_nonpositive_integer(Complex z) {
  return z.imag() == 0 && z.real() <= 0 && z.real() == std::floor(z.real());
}

// zeta(k) for k = 2..40 by Euler-Maclaurin with ten explicit terms.
const std::array<Real, 41>& zeta_table() {
  static const std::array<Real, 41> table = [] {
    std::array<Real, 41> z{};
    constexpr std::array<Real, 6> b2j = {1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30, 5.0L / 66, -691.0L / 2730};
    constexpr int kN = 10;
    for (int k = 2; k <= 40; ++k) {
      Real s = 0;
      for (int n = kN - 1; n >= 1; --n) s += std::pow(Real(n), Real(-k));
      const Real nk = std::pow(Real(kN), Real(-k));
      s += Real(kN) * nk / (k - 1) + nk / 2;
      Real rising = k;  // k (k+1) ... (k+2j-2)
      Real fact = 2;    // (2j)!
      Real npow = nk / kN;
      for (std::size_t j = 1; j <= b2j.size(); ++j) {
        s += b2j[j - 1] / fact * rising * npow;
        rising *= Real(k + 2 * j - 1) * Real(k + 2 * j);
        fact *= Real(2 * j + 1) * Real(2 * j + 2);
        npow /= Real(kN) * kN;
      }
      z[k] = s;
    }
    return z;
  }();
  return table;
}

// log Gamma(1 + a) for |a| < 1/4 by its Taylor series.
Complex lgamma1p_small(Complex a) {
  const auto& zeta = zeta_table();
  Complex sum = -kEulerGamma * a;
  Complex p = a;
  for (int k = 2; k <= 40; ++k) {
    p *= -a;
    const Complex term = zeta[k] * p / Real(k);
    sum += term;
    if (std::abs(term) < kEps * kEps) break;
  }
  return sum;
}

Real safe_abs(Complex z) { return std::abs(z); }

// Continued fraction for exp(x) x^(-a) Gamma(a, x) times exp(-x), i.e. x^(-a) Gamma(a, x).
Complex scaled_cf(Complex a, Real x) {
  Complex b = x + Real(1) - a;
  Complex c = Real(1) / kTiny;
  Complex d = Real(1) / b;
  Complex h = d;
  for (int i = 1; i < 100000; ++i) {
    const Complex an = -Real(i) * (Real(i) - a);
    b += Real(2);
    d = an * d + b;
    if (safe_abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (safe_abs(c) < kTiny) c = kTiny;
    d = Real(1) / d;
    const Complex del = d * c;
    h *= del;
    if (safe_abs(del - Real(1)) < kEps) break;
  }
  return std::exp(-x) * h;
}

// x^(-a) Gamma(a, x) = [Gamma(1+a) x^(-a) - 1]/a - sum_{n>=1} (-x)^n / (n! (a+n)).
Complex scaled_series(Complex a, Real x) {
  const Real log_x = std::log(x);
  Complex bracket;
  if (a == Complex(0)) {
    bracket = -kEulerGamma - log_x;
  } else if (std::abs(a) < Real(0.25)) {
    bracket = expm1(lgamma1p_small(a) - a * log_x) / a;
  } else {
    bracket = (std::exp(lgamma(Real(1) + a) - a * log_x) - Real(1)) / a;
  }
  Complex sum = 0;
  Real power = 1;  // (-x)^n / n!
  for (int n = 1; n < 10000; ++n) {
    power *= -x / n;
    const Complex term = power / (a + Real(n));
    sum += term;
    if (std::fabs(power) < kEps * kEps && n > x) break;
  }
  return bracket - sum;
}

}  // namespace

Complex lgamma(Complex z) {
  if (z.real() < Real(0.5)) {
    // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(kPi) - std::log(std::sin(kPi * z)) - lgamma(Real(1) - z);
  }
  Complex prod = 1;
  Complex w = z;
  while (std::abs(w) < Real(20) || w.real() < Real(10)) {
    prod *= w;
    w += Real(1);
  }
  return stirling(w) - std::log(prod);
}

Complex gamma(Complex z) {
  if (is_nonpositive_integer(z)) return {std::numeric_limits<Real>::infinity(), 0};
  return std::exp(lgamma(z));
}

Complex rgamma(Complex z) {
  if (is_nonpositive_integer(z)) return 0;
  if (z.real() < Real(0.5)) return std::sin(kPi * z) * std::exp(lgamma(Real(1) - z)) / kPi;
  return std::exp(-lgamma(z));
}

Complex expm1(Complex z) {
  const Real x = z.real();
  const Real y = z.imag();
  const Real s = std::sin(y / 2);
  return {std::expm1(x) * std::cos(y) - 2 * s * s, std::exp(x) * std::sin(y)};
}

Complex scaled_upper_gamma(Complex a, Real x) {
  if (!(x > 0)) return {std::numeric_limits<Real>::quiet_NaN(), 0};
  if (x > std::abs(a) + Real(1)) return scaled_cf(a, x);
  // Near a non-positive integer the series bracket and one sum term both blow up.
  const Real nearest = std::round(a.real());
  if (nearest <= 0 && std::abs(a - Complex(nearest)) < Real(1e-3)) return scaled_upper_gamma_quadrature(a, x);
  return scaled_series(a, x);
}

Complex upper_gamma(Complex a, Real x) { return std::exp(a * std::log(x)) * scaled_upper_gamma(a, x); }

Complex scaled_upper_gamma_quadrature(Complex a, Real x) {
  // integrand exp(a u - x e^u); pick U with x e^U - Re(a) U beyond 60 nats of decay.
  Real upper = 1;
  while (x * std::exp(upper) - a.real() * upper < Real(60) + std::log1p(upper)) upper += Real(0.5);
  using Integrator = boost::math::quadrature::gauss_kronrod<Real, 61>;
  auto re = [&](Real u) { return std::exp(a.real() * u - x * std::exp(u)) * std::cos(a.imag() * u); };
  auto im = [&](Real u) { return std::exp(a.real() * u - x * std::exp(u)) * std::sin(a.imag() * u); };
  const Real tol = Real(1e-17);
  return {Integrator::integrate(re, Real(0), upper, 20, tol), Integrator::integrate(im, Real(0), upper, 20, tol)};
}

Real scaled_upper_gamma_envelope(Real re_a, Real x0) {
  if (re_a <= 1) return 1;
  if (x0 <= re_a - 1) return std::numeric_limits<Real>::infinity();
  return 1 / (1 - (re_a - 1) / x0);
}

}  // namespace heightkit::special
