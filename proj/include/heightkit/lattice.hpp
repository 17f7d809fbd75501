#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "heightkit/matrix.hpp"
#include "heightkit/numeric.hpp"

namespace heightkit {

inline constexpr std::size_t kDefaultVectorCap = 50'000'000;

/// Result of a truncated series evaluation.
struct SeriesValue {
  Complex value = 0;
  Real error_bound = 0;
  std::size_t terms_used = 0;
  /// True when error_bound is a proven truncation bound (theta); false for
  /// analytically continued values where it is an estimate.
  bool rigorous = true;
};

/// Free Z-module of rank d with a positive definite Gram form.
/// Rational Gram matrices are kept exactly; the real copy drives enumeration.
class HermitianLattice {
 public:
  /// Throws ValidationError unless gram is symmetric positive definite.
  static HermitianLattice from_rational(RatMatrix gram);
  static HermitianLattice from_real(RealMatrix gram);
  static HermitianLattice unit(std::size_t rank);

  std::size_t rank() const { return gram_.rows(); }
  const RealMatrix& gram() const { return gram_; }
  const std::optional<RatMatrix>& exact_gram() const { return exact_; }
  bool is_exact() const { return exact_.has_value(); }

  /// Upper-triangular Cholesky data: Q(x) = sum_i diag[i] (x_i + sum_{j>i} mu(i,j) x_j)^2.
  const RealVector& cholesky_diag() const { return chol_diag_; }
  const RealMatrix& cholesky_mu() const { return chol_mu_; }

  /// Q(x) = x^T G x in working precision.
  Real norm_sq(const IntVector& x) const;
  /// Q(x) exactly; requires is_exact().
  Rat norm_sq_exact(const IntVector& x) const;

  bool operator==(const HermitianLattice& o) const;

 private:
  HermitianLattice() = default;
  void factor();

  RealMatrix gram_;
  std::optional<RatMatrix> exact_;
  RealVector chol_diag_;
  RealMatrix chol_mu_;
};

/// Covolume sqrt(det G); exact when det G is the square of a rational.
ExactReal vol(const HermitianLattice& lattice);

/// -log vol.
Real arithmetic_degree(const HermitianLattice& lattice);

/// Lattice with Gram matrix G^(-1).
HermitianLattice dual(const HermitianLattice& lattice);

/// Block-diagonal sum.
HermitianLattice direct_sum(const HermitianLattice& a, const HermitianLattice& b);

/// Every integer vector with Q(x) <= radius^2, including 0, in lexicographic order.
/// Throws CapacityError past `cap` vectors.
std::vector<IntVector> enumerate_vectors(const HermitianLattice& lattice, Real radius,
                                         std::size_t cap = kDefaultVectorCap);

/// Streams (x, Q(x)) for a superset of {Q(x) <= radius_sq} that may include
/// boundary vectors up to a relative 1e-15 slack. Order is deterministic.
void for_each_vector(const HermitianLattice& lattice, Real radius_sq,
                     const std::function<void(const IntVector&, Real)>& visit,
                     std::size_t cap = kDefaultVectorCap);

/// Proven bound on sum over Q(x) > radius_sq of exp(-pi t Q(x)).
Real theta_tail_bound(const HermitianLattice& lattice, Real t, Real radius_sq);

/// Smallest radius^2 (on a doubling schedule) whose theta tail bound is below eps.
Real theta_truncation_radius_sq(const HermitianLattice& lattice, Real t, Real eps);

/// theta(L, t) = sum over x of exp(-pi t Q(x)).
SeriesValue theta(const HermitianLattice& lattice, Real t, Real eps,
                  std::size_t cap = kDefaultVectorCap);

struct FunctionalEquationCheck {
  Real defect = 0;
  /// Sum of the error bounds of both sides.
  Real bound = 0;
  SeriesValue lhs;
  SeriesValue rhs;
};

/// |theta(L,t) - t^(-d/2) vol(L)^(-1) theta(L^dual, 1/t)|.
FunctionalEquationCheck theta_functional_equation_defect(const HermitianLattice& lattice, Real t,
                                                         Real eps = 1e-12L);

/// Completed zeta Lambda(L,s) = sqrt(vol) pi^(-s/2) Gamma(s/2) zeta(L,s), continued to s != 0, d.
SeriesValue completed_lambda(const HermitianLattice& lattice, Complex s, Real eps = 1e-12L,
                             std::size_t cap = kDefaultVectorCap);

/// zeta(L,s) = sum over x != 0 of Q(x)^(-s/2), from the continuation.
SeriesValue lattice_zeta(const HermitianLattice& lattice, Complex s, Real eps = 1e-12L,
                         std::size_t cap = kDefaultVectorCap);

}  // namespace heightkit
