#pragma once

#include <map>
#include <string>
#include <vector>

#include "heightkit/form.hpp"
#include "heightkit/lattice.hpp"
#include "heightkit/numeric.hpp"
#include "heightkit/places.hpp"

namespace heightkit {

/// Point of P^n(Q) held as its primitive integer representative with the
/// first nonzero coordinate positive.
class ProjPoint {
 public:
  static ProjPoint from_coords(BigIntVector coords);
  static ProjPoint from_ints(const IntVector& coords);
  /// Clears denominators of a nonzero rational vector.
  static ProjPoint from_rats(const RatVector& coords);

  std::size_t dim() const { return coords_.size() - 1; }
  const BigIntVector& coords() const { return coords_; }
  RatVector as_rats() const { return RatVector(coords_.begin(), coords_.end()); }
  BigInt max_abs() const;
  BigInt sum_squares() const;
  std::string to_string() const;

  friend bool operator==(const ProjPoint& a, const ProjPoint& b) { return a.coords_ == b.coords_; }
  friend bool operator<(const ProjPoint& a, const ProjPoint& b) { return a.coords_ < b.coords_; }

 private:
  BigIntVector coords_;
};

enum class ArchMetricKind { MAX, L2 };

ArchMetricKind parse_arch(const std::string& name);
std::string to_string(ArchMetricKind kind);

/// O(m) on P^n with the model metrics at every prime and `arch` at infinity.
struct MetrizedLineBundle {
  std::size_t n = 1;
  long m = 1;
  ArchMetricKind arch = ArchMetricKind::MAX;
};

/// An adelic point: `base` at every place except those overridden.
/// An override may also be given at infinity.
struct AdelicPoint {
  ProjPoint base;
  std::map<Place, RatVector> overrides;

  const RatVector* override_at(const Place& v) const;
};

using Section = Form;

/// Archimedean gauge of a coordinate vector: max |x_i| or sqrt(sum x_i^2).
ExactReal arch_gauge(ArchMetricKind kind, const RatVector& x);
Real arch_gauge(ArchMetricKind kind, const RealVector& x);
/// max_i |x_i|_p.
Rat padic_gauge(const RatVector& x, const BigInt& p);
/// ExactReal power of a gauge value (exact when the base is).
ExactReal power(const ExactReal& x, long m);
/// sqrt(sum_sq)^m, exact whenever the result is rational. Every L2 height goes through here
/// so equal squared norms give bit-identical values.
ExactReal l2_power(const Rat& sum_sq, long m);

/// H(x) = max|x_i|^m or (sum x_i^2)^(m/2) on the primitive representative.
ExactReal height_point(const MetrizedLineBundle& bundle, const ProjPoint& x);

/// ||s||_v(x) = |s(x)|_v / gauge_v(x)^m; independent of the scaling of x.
ExactReal local_norm(const MetrizedLineBundle& bundle, const Section& s, const Place& v, const RatVector& x);

/// prod_v ||s||_v(x_v)^(-1). Places outside the overrides are folded in with the
/// product formula, so only the overridden primes are visited explicitly.
ExactReal height_adelic(const MetrizedLineBundle& bundle, const Section& s, const AdelicPoint& x);

/// Rank-1 lattice with Gram [[H(b)^(-2)]], i.e. covolume 1/H(b).
HermitianLattice restrict_to_point(const MetrizedLineBundle& bundle, const ProjPoint& b);

/// Direct sum of the restrictions of O(m_i) for m_i in `degrees`.
HermitianLattice restrict_bundle_sum(const std::vector<long>& degrees, ArchMetricKind arch, const ProjPoint& b);

}  // namespace heightkit
