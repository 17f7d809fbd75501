#include "heightkit/heights.hpp"

#include <algorithm>
#include <cmath>

#include "heightkit/errors.hpp"

namespace heightkit {

ProjPoint ProjPoint::from_coords(BigIntVector coords) {
  if (coords.size() < 2) throw ValidationError("a projective point needs at least two coordinates");
  BigInt g = 0;
  for (const auto& c : coords) g = gcd(g, c);
  if (sgn(g) == 0) throw ValidationError("all coordinates are zero");
  const auto first = std::find_if(coords.begin(), coords.end(), [](const BigInt& c) { return sgn(c) != 0; });
  if (sgn(*first) < 0) g = -g;
  for (auto& c : coords) c /= g;
  ProjPoint p;
  p.coords_ = std::move(coords);
  return p;
}

ProjPoint ProjPoint::from_ints(const IntVector& coords) {
  BigIntVector big;
  big.reserve(coords.size());
  for (auto c : coords) big.emplace_back(static_cast<long>(c));
  return from_coords(std::move(big));
}

ProjPoint ProjPoint::from_rats(const RatVector& coords) {
  BigInt l = 1;
  for (const auto& c : coords) l = lcm(l, c.get_den());
  BigIntVector big;
  big.reserve(coords.size());
  for (const auto& c : coords) big.push_back(BigInt(c * l));
  return from_coords(std::move(big));
}

BigInt ProjPoint::max_abs() const {
  BigInt m = 0;
  for (const auto& c : coords_) m = std::max<BigInt>(m, abs(c));
  return m;
}

BigInt ProjPoint::sum_squares() const {
  BigInt s = 0;
  for (const auto& c : coords_) s += c * c;
  return s;
}

std::string ProjPoint::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ":";
    out += coords_[i].get_str();
  }
  return out + ")";
}

ArchMetricKind parse_arch(const std::string& name) {
  if (name == "max" || name == "MAX") return ArchMetricKind::MAX;
  if (name == "l2" || name == "L2") return ArchMetricKind::L2;
  throw ValidationError("unknown archimedean metric '" + name + "' (expected max or l2)");
}

std::string to_string(ArchMetricKind kind) { return kind == ArchMetricKind::MAX ? "max" : "l2"; }

const RatVector* AdelicPoint::override_at(const Place& v) const {
  auto it = overrides.find(v);
  return it == overrides.end() ? nullptr : &it->second;
}

ExactReal arch_gauge(ArchMetricKind kind, const RatVector& x) {
  Rat acc = 0;
  if (kind == ArchMetricKind::MAX) {
    for (const auto& c : x) acc = std::max<Rat>(acc, abs(c));
    return ExactReal::from_rat(acc);
  }
  for (const auto& c : x) acc += c * c;
  if (auto r = exact_sqrt(acc)) return ExactReal::from_rat(*r);
  return ExactReal::from_real(std::sqrt(to_real(acc)));
}

Real arch_gauge(ArchMetricKind kind, const RealVector& x) {
  Real acc = 0;
  if (kind == ArchMetricKind::MAX) {
    for (Real c : x) acc = std::max(acc, std::fabs(c));
    return acc;
  }
  for (Real c : x) acc += c * c;
  return std::sqrt(acc);
}

Rat padic_gauge(const RatVector& x, const BigInt& p) {
  Rat acc = 0;
  for (const auto& c : x) acc = std::max(acc, abs_p(c, p));
  return acc;
}

ExactReal power(const ExactReal& x, long m) {
  if (x.exact) return ExactReal::from_rat(rat_pow(*x.exact, m));
  return ExactReal::from_real(std::pow(x.value, static_cast<Real>(m)));
}

ExactReal l2_power(const Rat& sum_sq, long m) {
  if (m % 2 == 0) return ExactReal::from_rat(rat_pow(sum_sq, m / 2));
  if (auto r = exact_sqrt(sum_sq)) return ExactReal::from_rat(rat_pow(*r, m));
  return ExactReal::from_real(std::pow(std::sqrt(to_real(sum_sq)), static_cast<Real>(m)));
}

namespace {

void check_point(const MetrizedLineBundle& bundle, std::size_t size) {
  if (size != bundle.n + 1) throw ValidationError("point does not lie in P^" + std::to_string(bundle.n));
}

void check_section(const MetrizedLineBundle& bundle, const Section& s) {
  if (s.variables() != bundle.n + 1) throw ValidationError("section lives on a different projective space");
  if (s.degree() != bundle.m) throw ValidationError("section degree does not match the bundle degree");
  if (s.is_zero()) throw ValidationError("section is identically zero");
}

ExactReal times(const ExactReal& a, const ExactReal& b) {
  if (a.exact && b.exact) return ExactReal::from_rat(*a.exact * *b.exact);
  return ExactReal::from_real(a.value * b.value);
}

ExactReal inverse(const ExactReal& a) {
  if (a.exact) return ExactReal::from_rat(1 / *a.exact);
  return ExactReal::from_real(1 / a.value);
}

}  // namespace

ExactReal height_point(const MetrizedLineBundle& bundle, const ProjPoint& x) {
  check_point(bundle, x.coords().size());
  if (bundle.arch == ArchMetricKind::MAX) return ExactReal::from_rat(rat_pow(Rat(x.max_abs()), bundle.m));
  return l2_power(Rat(x.sum_squares()), bundle.m);
}

ExactReal local_norm(const MetrizedLineBundle& bundle, const Section& s, const Place& v, const RatVector& x) {
  check_section(bundle, s);
  check_point(bundle, x.size());
  const Rat value = s.evaluate(x);
  if (sgn(value) == 0) throw ZeroSectionError(v.to_string(), "section vanishes at the point at place " + v.to_string());
  if (v.is_finite()) return ExactReal::from_rat(abs_p(value, v.prime()) / rat_pow(padic_gauge(x, v.prime()), bundle.m));
  const ExactReal gauge = power(arch_gauge(bundle.arch, x), bundle.m);
  return times(ExactReal::from_rat(abs(value)), inverse(gauge));
}

ExactReal height_adelic(const MetrizedLineBundle& bundle, const Section& s, const AdelicPoint& x) {
  check_section(bundle, s);
  check_point(bundle, x.base.coords().size());
  for (const auto& [v, vec] : x.overrides) {
    check_point(bundle, vec.size());
    if (std::all_of(vec.begin(), vec.end(), [](const Rat& c) { return sgn(c) == 0; }))
      throw ValidationError("override at " + v.to_string() + " is the zero vector");
  }
  const RatVector e = x.base.as_rats();
  const Rat se = s.evaluate(e);
  if (sgn(se) == 0) throw ZeroSectionError("default", "section vanishes at the default point");

  // Non-overridden primes see the primitive point e, where ||s||_p(e) = |s(e)|_p.
  // By the product formula prod_{p not in O} |s(e)|_p^(-1) = |s(e)| * prod_{p in O} |s(e)|_p.
  ExactReal total = ExactReal::from_rat(1);
  Rat untouched = abs(se);
  for (const auto& [v, vec] : x.overrides) {
    if (v.is_infinite()) continue;
    untouched *= abs_p(se, v.prime());
    total = times(total, inverse(local_norm(bundle, s, v, vec)));
  }
  total = times(total, ExactReal::from_rat(untouched));
  const RatVector* at_inf = x.override_at(Place::infinite());
  return times(total, inverse(local_norm(bundle, s, Place::infinite(), at_inf ? *at_inf : e)));
}

HermitianLattice restrict_to_point(const MetrizedLineBundle& bundle, const ProjPoint& b) {
  check_point(bundle, b.coords().size());
  // H^(-2) is rational for both gauges: max^(-2m) or (sum x^2)^(-m).
  const Rat h_sq = bundle.arch == ArchMetricKind::MAX ? rat_pow(Rat(b.max_abs()), 2 * bundle.m)
                                                      : rat_pow(Rat(b.sum_squares()), bundle.m);
  return HermitianLattice::from_rational(RatMatrix{{1 / h_sq}});
}

HermitianLattice restrict_bundle_sum(const std::vector<long>& degrees, ArchMetricKind arch, const ProjPoint& b) {
  if (degrees.empty()) throw ValidationError("empty degree list");
  std::vector<Rat> diag;
  for (long m : degrees) {
    const MetrizedLineBundle bundle{b.dim(), m, arch};
    diag.push_back(restrict_to_point(bundle, b).exact_gram().value()(0, 0));
  }
  return HermitianLattice::from_rational(RatMatrix::diagonal(diag));
}

}  // namespace heightkit
