#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "heightkit/heights.hpp"
#include "heightkit/lattice.hpp"

namespace heightkit {

inline constexpr std::size_t kDefaultPointCap = 20'000'000;

/// Rational points of P^n with H <= bound, ordered by height then by representative.
std::vector<ProjPoint> enumerate_Pn(const MetrizedLineBundle& bundle, const Rat& bound,
                                    std::size_t cap = kDefaultPointCap);

/// #{x in P^n(Q) : H(x) <= bound} without listing the points: scans all but the last
/// coordinate and counts the last one coprime to the prefix gcd by Moebius inversion.
std::uint64_t count_points(const MetrizedLineBundle& bundle, const Rat& bound);

struct CountTable {
  std::vector<Real> thresholds;
  std::vector<std::uint64_t> counts;
};

/// Thresholds must be positive and strictly increasing.
CountTable count_table(const MetrizedLineBundle& bundle, const std::vector<Real>& thresholds);

/// sum over H(x) <= bound of H(x)^(-s), accumulated exactly term by term.
SeriesValue height_zeta_partial(const MetrizedLineBundle& bundle, Complex s, const Rat& bound);
/// Same sum with the points of equal height collapsed into count * term.
SeriesValue height_zeta_partial_grouped(const MetrizedLineBundle& bundle, Complex s, const Rat& bound);

/// N(H) ~ theta H^a (log H)^(b-1).
struct AsymptoticFit {
  Real a = 0;
  Real b = 1;
  Real theta = 0;
  /// Root mean square of the log-space residuals.
  Real residual = 0;
  std::size_t points_used = 0;
  Real model(Real h) const;
};

struct FitOptions {
  std::optional<Real> pin_a;
  std::optional<Real> pin_b;
  /// Fraction of the table (largest thresholds) entering the least-squares fit.
  Real top_fraction = 0.6L;
};

/// Throws DegenerateDesignError for fewer than 5 thresholds, a span under two decades,
/// or a singular normal system.
AsymptoticFit fit_asymptotics(const CountTable& table, const FitOptions& options = {});

}  // namespace heightkit
