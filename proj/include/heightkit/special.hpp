#pragma once

#include "heightkit/numeric.hpp"

namespace heightkit::special {

inline constexpr Real kPi = 3.141592653589793238462643383279502884L;
inline constexpr Real kEulerGamma = 0.577215664901532860606512090082402431L;

/// log Gamma(z) on the principal sheet up to multiples of 2*pi*i.
Complex lgamma(Complex z);
Complex gamma(Complex z);
/// 1/Gamma(z), entire; exactly 0 at non-positive integers.
Complex rgamma(Complex z);

/// exp(z) - 1 without cancellation for small |z|.
Complex expm1(Complex z);

/// Upper incomplete gamma Gamma(a, x) for complex a and real x > 0.
/// Continued fraction for x > |a| + 1, series otherwise.
Complex upper_gamma(Complex a, Real x);

/// x^(-a) * Gamma(a, x) = integral over t >= 1 of t^(a-1) exp(-x t). Entire in a.
Complex scaled_upper_gamma(Complex a, Real x);

/// Same quantity by Gauss-Kronrod quadrature of int_0^inf exp(a u - x e^u) du.
/// Slower; valid for every a, including non-positive integers.
Complex scaled_upper_gamma_quadrature(Complex a, Real x);

/// Upper bound for |x^(-a) Gamma(a, x)| summed over lattice terms beyond x >= x0:
/// returns C such that |x^(-a) Gamma(a,x)| <= C exp(-x) / x for all x >= x0.
Real scaled_upper_gamma_envelope(Real re_a, Real x0);

}  // namespace heightkit::special
