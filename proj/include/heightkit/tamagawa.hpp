#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heightkit/counts.hpp"
#include "heightkit/heights.hpp"

namespace heightkit {

struct Variety {
  enum class Kind { PN, FN };
  Kind kind = Kind::PN;
  long n = 1;

  static Variety Pn(long n);
  static Variety Fn(long n);
  /// Rank of Pic, which is a trivial Galois module here: 1 for P^n, 2 for F_n.
  int picard_rank() const { return kind == Kind::PN ? 1 : 2; }
  long dimension() const { return kind == Kind::PN ? n : 2; }
  std::string name() const;
};

/// #X(F_p) / p^dim.
Rat local_density_finite(const Variety& X, const BigInt& p);
/// (1 - 1/p)^rank Pic.
Rat convergence_factor(const Variety& X, const BigInt& p);

struct ArchimedeanDensity {
  Real value = 0;
  Real error = 0;
  std::optional<Rat> exact;
};

/// Integral of the anticanonical density over X(R). P^n MAX: exact, 2^n (n + 1).
/// P^n L2: radial quadrature. F_n: iterated quadrature, fiber over base, with the
/// base on the max gauge and the fiber in `arch` (the metric of height_Fn).
/// With `excised` set, the hyperplane x_1 = c (P^n) or the fiber z = c (F_n) is cut
/// out of the domain and the integral is assembled from slices on both sides.
/// Throws QuadratureError when the achieved error exceeds quad_eps * max(1, value).
ArchimedeanDensity archimedean_density(const Variety& X, ArchMetricKind arch, Real quad_eps = 1e-10L,
                                       std::optional<Real> excised = std::nullopt);

struct TamagawaSpec {
  Variety variety;
  ArchMetricKind arch = ArchMetricKind::MAX;
  std::uint64_t prime_cutoff = 100000;
  /// Finite primes in Sigma besides infinity; no convergence factor is applied there.
  std::vector<std::uint64_t> sigma_primes;
  Real quad_eps = 1e-10L;
};

struct LocalFactor {
  std::uint64_t p = 0;
  Rat density;
  Rat convergence;
};

struct TamagawaReport {
  Real tau = 0;
  Real mu_infinity = 0;
  std::optional<Rat> mu_infinity_exact;
  Real quadrature_error = 0;
  /// L*_Sigma(1, Pic) = prod over p in Sigma of (1 - 1/p)^r.
  Real l_star = 1;
  Real euler_product = 1;
  /// Absolute estimate of the omitted primes p > cutoff.
  Real tail_estimate = 0;
  /// quadrature and tail contributions to |tau - tau_exact|.
  Real error_budget = 0;
  std::size_t primes_used = 0;
  std::vector<LocalFactor> first_factors;  // the first 20 primes
};

TamagawaReport tamagawa_number(const TamagawaSpec& spec);

struct ProductTheoremCheck {
  TamagawaReport total;  // F_n
  TamagawaReport fiber;  // P^1 with the fiber metric
  TamagawaReport base;   // P^1 with the max metric
  Real defect = 0;
  Real budget = 0;  // 5 (quadrature + tail) over the three computations
};

/// tau(F_n) against tau(P^1, arch) tau(P^1, max).
ProductTheoremCheck product_theorem_check(long n, ArchMetricKind arch, std::uint64_t prime_cutoff = 100000,
                                          Real quad_eps = 1e-10L);

struct PeyreCheck {
  Real predicted = 0;  // alpha beta tau with alpha = 1/(n+1), beta = 1
  AsymptoticFit fit;   // anticanonical counts with (a, b) pinned to (1, 1)
  CountTable table;
  Real relative_gap = 0;
};

/// Compares alpha beta tau(P^n) with the constant fitted from anticanonical counts up to h_bound.
PeyreCheck peyre_constant_check(long n, ArchMetricKind arch, std::uint64_t prime_cutoff, Real h_bound);

}  // namespace heightkit
