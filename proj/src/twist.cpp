#include "heightkit/twist.hpp"

#include <cmath>

#include "heightkit/errors.hpp"

namespace heightkit {

namespace {

void require_invertible(const RatMatrix& g, std::size_t n) {
  if (g.rows() != n || g.cols() != n) throw ValidationError("group element has the wrong size");
  if (sgn(determinant(g)) == 0) throw SingularMatrixError("group component is singular");
}

ExactReal times(const ExactReal& a, const ExactReal& b) {
  if (a.exact && b.exact) return ExactReal::from_rat(*a.exact * *b.exact);
  return ExactReal::from_real(a.value * b.value);
}

// Positive c with w = c * (primitive integer vector).
Rat content(const RatVector& w) {
  BigInt num = 0, den = 1;
  for (const auto& c : w) {
    num = gcd(num, c.get_num());
    den = lcm(den, c.get_den());
  }
  Rat c(num, den);
  c.canonicalize();
  return c;
}

// prod over primes outside `skip` of |c|_p = (1/|c|) / prod_{p in skip} |c|_p.
Rat product_outside(const Rat& c, const std::map<BigInt, RatMatrix>& skip) {
  Rat r = 1 / abs(c);
  for (const auto& [p, m] : skip) r /= abs_p(c, p);
  return r;
}

}  // namespace

AdelicGroupElement AdelicGroupElement::identity(std::size_t n) {
  if (n == 0) throw ValidationError("group element of size 0");
  AdelicGroupElement g;
  g.default_ = RatMatrix::identity(n);
  return g;
}

AdelicGroupElement AdelicGroupElement::with(const Place& v, const RatMatrix& m) const {
  require_invertible(m, size());
  AdelicGroupElement g = *this;
  if (v.is_infinite()) {
    g.rat_inf_ = m;
    g.real_inf_.reset();
  } else {
    g.finite_[v.prime()] = m;
  }
  return g;
}

AdelicGroupElement AdelicGroupElement::with_real_infinite(const RealMatrix& m) const {
  if (m.rows() != size() || m.cols() != size()) throw ValidationError("group element has the wrong size");
  if (determinant(m) == 0) throw SingularMatrixError("archimedean component is singular");
  AdelicGroupElement g = *this;
  g.real_inf_ = m;
  g.rat_inf_.reset();
  return g;
}

AdelicGroupElement AdelicGroupElement::with_default(const RatMatrix& m) const {
  require_invertible(m, size());
  AdelicGroupElement g = *this;
  g.default_ = m;
  return g;
}

const RatMatrix& AdelicGroupElement::rational_component(const Place& v) const {
  if (v.is_infinite()) {
    if (real_inf_) throw ValidationError("archimedean component is not rational");
    return rat_inf_ ? *rat_inf_ : default_;
  }
  auto it = finite_.find(v.prime());
  return it == finite_.end() ? default_ : it->second;
}

RealMatrix AdelicGroupElement::real_infinite_component() const {
  if (real_inf_) return *real_inf_;
  return to_real(rat_inf_ ? *rat_inf_ : default_);
}

bool AdelicGroupElement::is_diagonal() const {
  if (!default_.is_diagonal()) return false;
  for (const auto& [p, m] : finite_)
    if (!m.is_diagonal()) return false;
  if (rat_inf_ && !rat_inf_->is_diagonal()) return false;
  return !real_inf_ || real_inf_->is_diagonal();
}

Rat Character::evaluate(const RatMatrix& d) const {
  if (d.rows() != exponents.size() || !d.is_diagonal()) throw ValidationError("character needs a diagonal matrix of matching size");
  Rat r = 1;
  for (std::size_t i = 0; i < exponents.size(); ++i) r *= rat_pow(d(i, i), exponents[i]);
  return r;
}

Real Character::evaluate(const RealMatrix& d) const {
  if (d.rows() != exponents.size() || !d.is_diagonal()) throw ValidationError("character needs a diagonal matrix of matching size");
  Real r = 1;
  for (std::size_t i = 0; i < exponents.size(); ++i) r *= std::pow(d(i, i), static_cast<Real>(exponents[i]));
  return r;
}

Character weight_of(const Section& monomial) {
  Character chi;
  for (int a : monomial.monomial_exponents()) chi.exponents.push_back(-a);
  return chi;
}

ProjPoint translate_point(const RatMatrix& gamma, const ProjPoint& x) {
  if (gamma.cols() != x.coords().size()) throw ValidationError("matrix and point sizes differ");
  return ProjPoint::from_rats(gamma.apply(x.as_rats()));
}

ExactReal twisted_height(const MetrizedLineBundle& bundle, const AdelicGroupElement& g, const ProjPoint& x) {
  if (g.size() != bundle.n + 1 || x.coords().size() != bundle.n + 1)
    throw ValidationError("twist, bundle and point sizes disagree");
  const RatVector e = x.as_rats();

  Rat finite = 1;
  for (const auto& [p, m] : g.finite_overrides()) finite *= padic_gauge(m.apply(e), p);
  // Every other prime sees the default D: ||D e||_p = |content(D e)|_p.
  finite *= product_outside(content(g.default_component().apply(e)), g.finite_overrides());

  if (!g.infinite_is_rational()) {
    RealVector er;
    for (const auto& c : e) er.push_back(to_real(c));
    const Real arch = arch_gauge(bundle.arch, g.real_infinite_component().apply(er));
    return ExactReal::from_real(std::pow(arch * to_real(finite), static_cast<Real>(bundle.m)));
  }
  const RatVector ge = g.rational_component(Place::infinite()).apply(e);
  if (bundle.arch == ArchMetricKind::MAX) return ExactReal::from_rat(rat_pow(*arch_gauge(bundle.arch, ge).exact * finite, bundle.m));
  Rat sum_sq = 0;
  for (const auto& c : ge) sum_sq += c * c;
  return l2_power(sum_sq * finite * finite, bundle.m);
}

ExactReal twisted_metric_norm(const MetrizedLineBundle& bundle, const AdelicGroupElement& g, const Place& v,
                              const Section& s, const RatVector& x) {
  if (g.size() != bundle.n + 1) throw ValidationError("twist and bundle sizes disagree");
  if (v.is_infinite() && !g.infinite_is_rational()) {
    const RealMatrix gi = g.real_infinite_component();
    RealVector xr;
    for (const auto& c : x) xr.push_back(to_real(c));
    const RealVector y = gi.apply(xr);
    const Real value = s.evaluate(inverse(gi).apply(y));
    if (value == 0) throw ZeroSectionError(v.to_string(), "section vanishes at the point at place inf");
    return ExactReal::from_real(std::fabs(value) / std::pow(arch_gauge(bundle.arch, y), static_cast<Real>(bundle.m)));
  }
  const RatMatrix& gv = g.rational_component(v);
  const Section moved = s.substitute(inverse(gv));  // g.s = s o g^(-1)
  return local_norm(bundle, moved, v, gv.apply(x));
}

TwistComparison compare_twisted(const MetrizedLineBundle& bundle, const AdelicGroupElement& g, const Section& s,
                                const ProjPoint& x) {
  if (!g.is_diagonal()) throw ValidationError("weight comparison needs a diagonal twist");
  if (!g.infinite_is_rational()) throw ValidationError("weight comparison needs a rational archimedean component");
  if (!s.is_monomial()) throw ValidationError("weight comparison needs a monomial section");
  const Character chi = weight_of(s);
  const RatVector e = x.as_rats();
  const Place inf = Place::infinite();

  AdelicPoint gx{ProjPoint::from_rats(g.default_component().apply(e)), {}};
  gx.overrides[inf] = g.rational_component(inf).apply(e);
  Rat factor = 1 / abs(chi.evaluate(g.rational_component(inf)));
  for (const auto& [p, m] : g.finite_overrides()) {
    gx.overrides[Place::finite(p)] = m.apply(e);
    factor /= abs_p(chi.evaluate(m), p);
  }
  factor /= product_outside(chi.evaluate(g.default_component()), g.finite_overrides());

  TwistComparison out{twisted_height(bundle, g, x), {}};
  out.rhs = times(ExactReal::from_rat(factor), height_adelic(bundle, s, gx));
  return out;
}

AdelicGroupElement class_right_translate(const AdelicGroupElement& g, const RatMatrix& gamma) {
  require_invertible(gamma, g.size());
  AdelicGroupElement out = g.with_default(g.default_component() * gamma);
  for (const auto& [p, m] : g.finite_overrides()) out = out.with(Place::finite(p), m * gamma);
  if (!g.infinite_is_rational())
    out = out.with_real_infinite(g.real_infinite_component() * to_real(gamma));
  else if (g.has_infinite_override())
    out = out.with(Place::infinite(), g.rational_component(Place::infinite()) * gamma);
  return out;
}

}  // namespace heightkit
