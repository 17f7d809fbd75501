#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "heightkit/heights.hpp"
#include "heightkit/lattice.hpp"

namespace heightkit {

/// THETA: theta(L,1) vol(L)^s.  ZETA: zeta(L, d s) vol(L)^s.  NORM: vol(L)^s.
enum class PhiKind { THETA, ZETA, NORM };

PhiKind parse_phi_kind(const std::string& name);
std::string to_string(PhiKind kind);

/// L(E, U, Phi) = sum over b in U with H_O(1)(b) <= cutoff of Phi(E|_b), E = sum of O(m_i) on P^1.
struct ArakelovSeriesSpec {
  std::vector<long> bundle_degrees{1};
  ArchMetricKind arch = ArchMetricKind::MAX;
  Complex s = 0;
  std::uint64_t cutoff = 1;
  PhiKind phi_kind = PhiKind::THETA;
  /// U; empty means all of P^1(Q).
  std::function<bool(const ProjPoint&)> filter;
};

struct ArakelovTerm {
  ProjPoint b;
  ExactReal height;  // H_O(1)(b)
  ExactReal vol;     // covolume of E|_b
  Complex phi = 0;   // theta(E|_b, 1), zeta(E|_b, d s) or 1
  Complex term = 0;
  Real error_bound = 0;
};

/// Terms are visited by height of b, then by representative. theta/zeta values get eps / #terms each.
/// When `terms` is given the individual terms are appended to it.
SeriesValue arakelov_L_partial(const ArakelovSeriesSpec& spec, Real eps = 1e-12L,
                               std::vector<ArakelovTerm>* terms = nullptr);

/// The same spec with every degree negated and s -> 1 - s.
ArakelovSeriesSpec dual_spec(const ArakelovSeriesSpec& spec);

struct DualityCheck {
  Real defect = 0;
  Real bound = 0;
  SeriesValue lhs;
  SeriesValue rhs;
};

/// |Theta(E, s) - Theta(E^dual, 1 - s)| over the same base points.
DualityCheck theta_duality_defect(const ArakelovSeriesSpec& spec, Real eps = 1e-12L);

struct GroupedCoefficient {
  std::uint64_t N = 0;
  std::uint64_t count = 0;          // #{b : H(b) = N}
  std::uint64_t printed_count = 0;  // 2(1 + 2 phi(N)), kept only for comparison
  Real theta = 0;                   // common theta(E|_b, 1)
  Complex term = 0;                 // common theta(E|_b, 1) vol^s
};

struct GroupedSeries {
  std::vector<GroupedCoefficient> coefficients;
  Complex grouped_sum = 0;
  SeriesValue direct;
  /// grouped_sum == direct.value bit for bit.
  bool exact_match = false;
};

/// Groups the direct sum (max metric) by N = H(b), N <= n_max.
GroupedSeries grouped_series_coefficients(const std::vector<long>& degrees, Complex s, std::uint64_t n_max,
                                          Real eps = 1e-12L);

struct ProbeRow {
  Complex s = 0;
  Complex partial_b = 0;
  Complex partial_2b = 0;
  Complex partial_4b = 0;
  /// log2 |S_4B - S_2B| / |S_2B - S_B|: about 3 - Re(s) for O(1).
  Real growth_exponent = 0;
  bool convergent = false;
};

/// Partial sums of Theta at cutoffs B, 2B, 4B for each s (spec.s is ignored).
std::vector<ProbeRow> convergence_abscissa_probe(const ArakelovSeriesSpec& spec, const std::vector<Complex>& s_grid,
                                                 Real eps = 1e-12L);

}  // namespace heightkit
