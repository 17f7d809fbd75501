#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "heightkit/heights.hpp"
#include "heightkit/lattice.hpp"

namespace heightkit {

/// F_n = P(O + O(n)) over P^1, built from the G_m-torsor of class n.
/// Cox coordinates: u, v on the base; s, t on the fiber with t of base degree n.
struct HirzebruchSurface {
  long n = 0;
  /// Set when constructed from a negative n; fiber coordinates are then swapped.
  bool fiber_swapped = false;

  static HirzebruchSurface make(long n);
};

/// lambda = O_X(k) on the fiber with linearization weight w, alpha = O_B(j) on the base.
/// Heights depend on (k, n w + j) only.
struct FibrationLineClass {
  long k = 0;
  long w = 0;
  long j = 0;

  long base_exponent(long n) const { return n * w + j; }
  friend bool operator==(const FibrationLineClass&, const FibrationLineClass&) = default;
};

struct FnPoint {
  ProjPoint base;           // primitive (u:v), first nonzero positive
  std::int64_t s = 0, t = 0;  // coprime, first nonzero positive

  /// Normalizes arbitrary Cox coordinates (u, v, s, t) under
  /// (u, v, s, t) ~ (l u, l v, m s, l^n m t). Throws ValidationError on (0,0) pairs.
  static FnPoint from_cox(const HirzebruchSurface& Y, const IntVector& uvst);
  std::string to_string() const;

  friend bool operator==(const FnPoint& a, const FnPoint& b) {
    return a.base == b.base && a.s == b.s && a.t == b.t;
  }
};

/// M(P)^k N^(n w + j) with N = max(|u|,|v|) and M = max(|s|, |t|/N^n) (MAX)
/// or sqrt(s^2 + t^2/N^(2n)) (L2). The base always uses the max gauge.
ExactReal height_Fn(const HirzebruchSurface& Y, const FibrationLineClass& c, const FnPoint& P, ArchMetricKind arch);

enum class Chart { U, V };  // u != 0 or v != 0

/// Same height from the affine chart: a product of local factors over infinity and the
/// primes in the support of the chart coordinates, with the O(n) frame norm 1/max(1,|z|_w)^n.
ExactReal height_Fn_in_chart(const HirzebruchSurface& Y, const FibrationLineClass& c, const FnPoint& P,
                             ArchMetricKind arch, Chart chart);

/// The fiber factor M(P) read off the restricted lattice E_b = restrict_bundle_sum([0, n], MAX, b).
ExactReal fiber_lattice_height(const HirzebruchSurface& Y, const FnPoint& P, ArchMetricKind arch);

/// (height for (k, w, j), height for (k, w + 1, j - n)).
std::pair<ExactReal, ExactReal> character_shift_invariance(const HirzebruchSurface& Y, const FibrationLineClass& c,
                                                           const FnPoint& P, ArchMetricKind arch);

/// Effective cone: generated by E = {s = 0} = (1, 0, 0) and a fiber (0, 0, 1);
/// effective iff k >= 0 and n w + j >= 0 (fiber weights start at 0 for the action t.(s:u) = (ts:u)).
bool is_effective(const HirzebruchSurface& Y, const FibrationLineClass& c);

/// -K = 2E + (n + 2)F = (2, 1, 2).
FibrationLineClass anticanonical_class(const HirzebruchSurface& Y);

/// The negative section {s = 0}.
bool on_exceptional_section(const FnPoint& P);

struct FnEnumerationOptions {
  /// Drop the points of E = {s = 0}.
  bool exclude_exceptional = false;
  std::size_t cap = 20'000'000;
};

/// Points with N^(n w + j) <= bound and height <= bound, fiberwise, ordered by base then fiber.
/// Off E every point of height <= bound satisfies the base condition since M >= 1 there.
/// Requires k >= 1 and n w + j >= 1.
std::vector<FnPoint> enumerate_Fn(const HirzebruchSurface& Y, const FibrationLineClass& c, ArchMetricKind arch,
                                  const Rat& bound, const FnEnumerationOptions& options = {});

}  // namespace heightkit
