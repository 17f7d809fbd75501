#include "heightkit/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heightkit/errors.hpp"
#include "heightkit/special.hpp"

namespace heightkit {

namespace {

using special::kPi;

constexpr Real kMachEps = std::numeric_limits<Real>::epsilon();
// Relative widening of the enumeration radius so rounding never drops a boundary vector.
constexpr Real kRadiusSlack = 1e-15L;

// Neumaier-compensated sum so long sums stay reproducible and accurate.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    if constexpr (std::is_same_v<T, Complex>) {
      comp_ += Complex(fix(sum_.real(), x.real(), t.real()), fix(sum_.imag(), x.imag(), t.imag()));
    } else {
      comp_ += fix(sum_, x, t);
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  static Real fix(Real s, Real x, Real t) { return std::fabs(s) >= std::fabs(x) ? (s - t) + x : (x - t) + s; }
  T sum_ = T(0);
  T comp_ = T(0);
};

}  // namespace

HermitianLattice HermitianLattice::from_rational(RatMatrix gram) {
  if (gram.rows() == 0 || !gram.square()) throw ValidationError("Gram matrix must be square with rank >= 1");
  if (!gram.is_symmetric()) throw ValidationError("Gram matrix is not symmetric");
  for (const Rat& minor : leading_minors(gram))
    if (sgn(minor) <= 0) throw ValidationError("Gram matrix is not positive definite");
  HermitianLattice l;
  l.gram_ = to_real(gram);
  l.exact_ = std::move(gram);
  l.factor();
  return l;
}

HermitianLattice HermitianLattice::from_real(RealMatrix gram) {
  if (gram.rows() == 0 || !gram.square()) throw ValidationError("Gram matrix must be square with rank >= 1");
  if (!gram.is_symmetric()) throw ValidationError("Gram matrix is not symmetric");
  HermitianLattice l;
  l.gram_ = std::move(gram);
  l.factor();
  return l;
}

HermitianLattice HermitianLattice::unit(std::size_t rank) { return from_rational(RatMatrix::identity(rank)); }

void HermitianLattice::factor() {
  // G = L D L^T with L unit lower triangular; mu(i, j) = L(j, i) for j > i.
  const std::size_t d = rank();
  RealMatrix lower = RealMatrix::identity(d);
  chol_diag_.assign(d, 0);
  for (std::size_t j = 0; j < d; ++j) {
    Real dj = gram_(j, j);
    for (std::size_t k = 0; k < j; ++k) dj -= lower(j, k) * lower(j, k) * chol_diag_[k];
    if (!(dj > 0)) throw ValidationError("Gram matrix is not positive definite");
    chol_diag_[j] = dj;
    for (std::size_t i = j + 1; i < d; ++i) {
      Real v = gram_(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= lower(i, k) * lower(j, k) * chol_diag_[k];
      lower(i, j) = v / dj;
    }
  }
  chol_mu_ = lower.transpose();
}

Real HermitianLattice::norm_sq(const IntVector& x) const {
  const std::size_t d = rank();
  Real q = 0;
  for (std::size_t i = 0; i < d; ++i) {
    Real row = 0;
    for (std::size_t j = 0; j < d; ++j) row += gram_(i, j) * static_cast<Real>(x[j]);
    q += static_cast<Real>(x[i]) * row;
  }
  return q;
}

Rat HermitianLattice::norm_sq_exact(const IntVector& x) const {
  if (!exact_) throw ValidationError("lattice has no exact Gram matrix");
  Rat q = 0;
  const std::size_t d = rank();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (x[i] != 0 && x[j] != 0) q += (*exact_)(i, j) * Rat(static_cast<long>(x[i])) * Rat(static_cast<long>(x[j]));
  return q;
}

bool HermitianLattice::operator==(const HermitianLattice& o) const {
  if (exact_ && o.exact_) return *exact_ == *o.exact_;
  return gram_ == o.gram_;
}

ExactReal vol(const HermitianLattice& lattice) {
  if (lattice.is_exact()) {
    const Rat det = determinant(*lattice.exact_gram());
    if (auto root = exact_sqrt(det)) return ExactReal::from_rat(*root);
    return ExactReal::from_real(std::sqrt(to_real(det)));
  }
  return ExactReal::from_real(std::sqrt(determinant(lattice.gram())));
}

Real arithmetic_degree(const HermitianLattice& lattice) {
  const ExactReal v = vol(lattice);
  return -std::log(v.value);
}

HermitianLattice dual(const HermitianLattice& lattice) {
  if (lattice.is_exact()) return HermitianLattice::from_rational(inverse(*lattice.exact_gram()));
  RealMatrix inv = inverse(lattice.gram());
  for (std::size_t i = 0; i < inv.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j) inv(i, j) = inv(j, i) = (inv(i, j) + inv(j, i)) / 2;
  return HermitianLattice::from_real(std::move(inv));
}

HermitianLattice direct_sum(const HermitianLattice& a, const HermitianLattice& b) {
  const std::size_t da = a.rank();
  const std::size_t n = da + b.rank();
  if (a.is_exact() && b.is_exact()) {
    RatMatrix g(n, n);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j) g(i, j) = (*a.exact_gram())(i, j);
    for (std::size_t i = 0; i < b.rank(); ++i)
      for (std::size_t j = 0; j < b.rank(); ++j) g(da + i, da + j) = (*b.exact_gram())(i, j);
    return HermitianLattice::from_rational(std::move(g));
  }
  RealMatrix g(n, n);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) g(i, j) = a.gram()(i, j);
  for (std::size_t i = 0; i < b.rank(); ++i)
    for (std::size_t j = 0; j < b.rank(); ++j) g(da + i, da + j) = b.gram()(i, j);
  return HermitianLattice::from_real(std::move(g));
}

void for_each_vector(const HermitianLattice& lattice, Real radius_sq,
                     const std::function<void(const IntVector&, Real)>& visit, std::size_t cap) {
  if (!(radius_sq >= 0)) throw ValidationError("enumeration radius must be non-negative");
  const std::size_t d = lattice.rank();
  const RealVector& q = lattice.cholesky_diag();
  const RealMatrix& mu = lattice.cholesky_mu();
  const Real bound = radius_sq * (1 + kRadiusSlack) + std::numeric_limits<Real>::min();

  IntVector x(d, 0);
  RealVector partial(d + 1, 0);  // partial[i] = sum over k >= i of q_k (x_k - c_k)^2
  std::size_t count = 0;

  // Recursive walk from the last coordinate down to the first.
  std::function<void(std::size_t)> walk = [&](std::size_t level) {
    const std::size_t i = level - 1;
    Real center = 0;
    for (std::size_t j = i + 1; j < d; ++j) center -= mu(i, j) * static_cast<Real>(x[j]);
    const Real room = bound - partial[i + 1];
    if (room < 0) return;
    const Real width = std::sqrt(room / q[i]);
    const auto lo = static_cast<std::int64_t>(std::ceil(center - width));
    const auto hi = static_cast<std::int64_t>(std::floor(center + width));
    for (std::int64_t v = lo; v <= hi; ++v) {
      x[i] = v;
      const Real diff = static_cast<Real>(v) - center;
      partial[i] = partial[i + 1] + q[i] * diff * diff;
      if (partial[i] > bound) continue;
      if (i == 0) {
        if (++count > cap) throw CapacityError("lattice enumeration exceeded " + std::to_string(cap) + " vectors");
        visit(x, partial[0]);
      } else {
        walk(i);
      }
    }
    x[i] = 0;
  };
  walk(d);
}

std::vector<IntVector> enumerate_vectors(const HermitianLattice& lattice, Real radius, std::size_t cap) {
  if (!(radius >= 0)) throw ValidationError("enumeration radius must be non-negative");
  const Real r2 = radius * radius;
  std::vector<IntVector> out;
  if (lattice.is_exact()) {
    const Rat exact_r2 = rat_from_real(radius) * rat_from_real(radius);
    for_each_vector(
        lattice, r2, [&](const IntVector& x, Real) {
          if (lattice.norm_sq_exact(x) <= exact_r2) out.push_back(x);
        },
        cap);
  } else {
    for_each_vector(
        lattice, r2, [&](const IntVector& x, Real) {
          if (lattice.norm_sq(x) <= r2) out.push_back(x);
        },
        cap);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Real theta_tail_bound(const HermitianLattice& lattice, Real t, Real radius_sq) {
  // For 0 < c < 1: sum_{Q > R^2} e^{-pi t Q} <= e^{-pi t c R^2} theta(L, t (1-c)), and
  // theta(L, tau) <= prod_i (1 + 1/sqrt(tau q_i)) coordinate by coordinate (sum <= max + integral).
  Real best = std::numeric_limits<Real>::infinity();
  for (int k = 1; k < 40; ++k) {
    const Real c = k / Real(40);
    const Real tau = t * (1 - c);
    Real log_prod = 0;
    for (Real qi : lattice.cholesky_diag()) log_prod += std::log1p(1 / std::sqrt(tau * qi));
    best = std::min(best, -kPi * t * c * radius_sq + log_prod);
  }
  return std::exp(best) * (1 + 1e-12L);
}

Real theta_truncation_radius_sq(const HermitianLattice& lattice, Real t, Real eps) {
  if (!(t > 0) || !(eps > 0)) throw ValidationError("theta needs t > 0 and eps > 0");
  Real lo = 0;
  Real hi = std::max<Real>(lattice.rank() / (2 * kPi * t), Real(1) / (kPi * t));
  while (theta_tail_bound(lattice, t, hi) >= eps) {
    lo = hi;
    hi *= 2;
  }
  // Tighten within the last doubling step; the bound is monotone in R^2.
  for (int it = 0; it < 30 && hi - lo > 1e-3L * hi; ++it) {
    const Real mid = (lo + hi) / 2;
    if (theta_tail_bound(lattice, t, mid) < eps)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

SeriesValue theta(const HermitianLattice& lattice, Real t, Real eps, std::size_t cap) {
  const Real r2 = theta_truncation_radius_sq(lattice, t, eps);
  CompensatedSum<Real> sum;
  std::size_t terms = 0;
  for_each_vector(
      lattice, r2,
      [&](const IntVector&, Real q) {
        sum.add(std::exp(-kPi * t * q));
        ++terms;
      },
      cap);
  SeriesValue out;
  out.value = sum.value();
  out.terms_used = terms;
  // Per-term exp and Q rounding: a few ulps relative to each term, all terms positive.
  out.error_bound = theta_tail_bound(lattice, t, r2) + 8 * kMachEps * (1 + kPi * t * r2) * sum.value();
  out.rigorous = true;
  return out;
}

FunctionalEquationCheck theta_functional_equation_defect(const HermitianLattice& lattice, Real t, Real eps) {
  if (!(t > 0)) throw ValidationError("theta needs t > 0");
  const HermitianLattice dl = dual(lattice);
  const Real v = vol(lattice).value;
  const Real d = static_cast<Real>(lattice.rank());
  const Real scale = 1 / (std::pow(t, d / 2) * v);
  FunctionalEquationCheck out;
  out.lhs = theta(lattice, t, eps);
  out.rhs = theta(dl, 1 / t, eps);
  out.rhs.value *= scale;
  out.rhs.error_bound *= scale;
  out.defect = std::abs(out.lhs.value - out.rhs.value);
  out.bound = out.lhs.error_bound + out.rhs.error_bound;
  return out;
}

namespace {

struct IncompleteGammaSum {
  Complex value = 0;
  Real tail = 0;
  std::size_t terms = 0;
};

// sum over x != 0 in L of x^(-a) Gamma(a, x) at x = pi Q(x), truncated with tail below eps.
IncompleteGammaSum incomplete_gamma_sum(const HermitianLattice& lattice, Complex a, Real eps, std::size_t cap) {
  Real r2 = theta_truncation_radius_sq(lattice, 1, eps);
  auto tail_bound = [&](Real radius_sq) {
    const Real x0 = kPi * radius_sq;
    const Real envelope = special::scaled_upper_gamma_envelope(a.real(), x0);
    return envelope / x0 * theta_tail_bound(lattice, 1, radius_sq);
  };
  while (tail_bound(r2) >= eps) r2 *= 2;
  IncompleteGammaSum out;
  CompensatedSum<Complex> sum;
  for_each_vector(
      lattice, r2,
      [&](const IntVector&, Real q) {
        if (q == 0) return;
        sum.add(special::scaled_upper_gamma(a, kPi * q));
        ++out.terms;
      },
      cap);
  out.value = sum.value();
  out.tail = tail_bound(r2);
  return out;
}

}  // namespace

SeriesValue completed_lambda(const HermitianLattice& lattice, Complex s, Real eps, std::size_t cap) {
  const Real d = static_cast<Real>(lattice.rank());
  if (s == Complex(0) || s == Complex(d)) throw PoleError("Lambda has a pole at s = 0 and s = d");
  const Real v = vol(lattice).value;
  const Real root = std::sqrt(v);
  const IncompleteGammaSum direct = incomplete_gamma_sum(lattice, s / Real(2), eps, cap);
  const IncompleteGammaSum dual_side = incomplete_gamma_sum(dual(lattice), (Complex(d) - s) / Real(2), eps, cap);
  // Split of the Mellin integral of theta(L,t) - 1 at t = 1; the two rational
  // terms carry the poles with residues -2 sqrt(vol) at 0 and 2/sqrt(vol) at d.
  SeriesValue out;
  out.value = root * direct.value + dual_side.value / root + Real(2) / (root * (s - d)) - Real(2) * root / s;
  out.terms_used = direct.terms + dual_side.terms;
  out.error_bound = root * direct.tail + dual_side.tail / root +
                    64 * kMachEps * (root * std::abs(direct.value) + std::abs(dual_side.value) / root +
                                     std::abs(Real(2) / (root * (s - d))) + std::abs(Real(2) * root / s));
  out.rigorous = false;
  return out;
}

SeriesValue lattice_zeta(const HermitianLattice& lattice, Complex s, Real eps, std::size_t cap) {
  SeriesValue lambda = completed_lambda(lattice, s, eps, cap);
  const Real root = std::sqrt(vol(lattice).value);
  const Complex factor = std::exp(s / Real(2) * std::log(kPi)) * special::rgamma(s / Real(2)) / root;
  if (!std::isfinite(std::abs(factor))) throw ValidationError("zeta normalisation overflows at this s");
  lambda.value *= factor;
  lambda.error_bound *= std::abs(factor);
  return lambda;
}

}  // namespace heightkit
