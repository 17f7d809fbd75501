#include "heightkit/arakelov.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "heightkit/counts.hpp"
#include "heightkit/errors.hpp"
#include "heightkit/places.hpp"

namespace heightkit {

namespace {

constexpr Real kRound = std::numeric_limits<Real>::epsilon();

void validate(const ArakelovSeriesSpec& spec) {
  if (spec.bundle_degrees.empty()) throw ValidationError("empty degree list");
  if (spec.cutoff < 1) throw ValidationError("cutoff must be at least 1");
}

std::vector<ProjPoint> base_points(const ArakelovSeriesSpec& spec, std::uint64_t cutoff) {
  auto points = enumerate_Pn({1, 1, spec.arch}, Rat(BigInt(static_cast<unsigned long>(cutoff))));
  if (!spec.filter) return points;
  std::vector<ProjPoint> kept;
  for (auto& b : points)
    if (spec.filter(b)) kept.push_back(std::move(b));
  return kept;
}

bool within(const ProjPoint& b, ArchMetricKind arch, std::uint64_t cutoff) {
  const BigInt c(static_cast<unsigned long>(cutoff));
  return arch == ArchMetricKind::MAX ? b.max_abs() <= c : b.sum_squares() <= c * c;
}

// Everything about E|_b that does not depend on s; shared by all b with the same Gram.
struct Restriction {
  ExactReal vol;
  Complex phi = 0;
  Real phi_error = 0;
};

using GramKey = std::vector<Rat>;

GramKey key_of(const HermitianLattice& l) {
  const RatMatrix& g = *l.exact_gram();
  GramKey k;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) k.push_back(g(i, j));
  return k;
}

class RestrictionCache {
 public:
  RestrictionCache(const ArakelovSeriesSpec& spec, Real term_eps) : spec_(spec), eps_(term_eps) {}

  const Restriction& get(const ProjPoint& b) {
    const HermitianLattice l = restrict_bundle_sum(spec_.bundle_degrees, spec_.arch, b);
    auto key = key_of(l);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Restriction r;
    r.vol = vol(l);
    switch (spec_.phi_kind) {
      case PhiKind::THETA: {
        const SeriesValue t = theta(l, 1, eps_);
        r.phi = t.value;
        r.phi_error = t.error_bound;
        break;
      }
      case PhiKind::ZETA: {
        const SeriesValue z = lattice_zeta(l, static_cast<Real>(l.rank()) * spec_.s, eps_);
        r.phi = z.value;
        r.phi_error = z.error_bound;
        break;
      }
      case PhiKind::NORM:
        r.phi = 1;
        break;
    }
    return cache_.emplace(std::move(key), r).first->second;
  }

 private:
  const ArakelovSeriesSpec& spec_;
  Real eps_;
  std::map<GramKey, Restriction> cache_;
};

Complex vol_power(const ExactReal& v, Complex s) {
  if (s == Complex(0)) return 1;
  return std::exp(s * std::log(v.value));
}

struct Term {
  Complex value;
  Real error;
};

Term make_term(const Restriction& r, Complex s) {
  const Complex vs = vol_power(r.vol, s);
  const Complex value = r.phi * vs;
  return {value, r.phi_error * std::abs(vs) + 8 * kRound * std::abs(value) * (1 + std::abs(s))};
}

struct ComplexSum {
  ExactSum re, im;
  void add(Complex z) {
    re.add(z.real());
    im.add(z.imag());
  }
  void add(Complex z, const BigInt& count) {
    re.add(z.real(), count);
    im.add(z.imag(), count);
  }
  Complex value() const { return {re.value(), im.value()}; }
};

}  // namespace

PhiKind parse_phi_kind(const std::string& name) {
  if (name == "theta" || name == "THETA") return PhiKind::THETA;
  if (name == "zeta" || name == "ZETA") return PhiKind::ZETA;
  if (name == "norm" || name == "NORM") return PhiKind::NORM;
  throw ValidationError("unknown phi kind '" + name + "' (theta, zeta, norm)");
}

std::string to_string(PhiKind kind) {
  switch (kind) {
    case PhiKind::THETA: return "theta";
    case PhiKind::ZETA: return "zeta";
    case PhiKind::NORM: return "norm";
  }
  return "?";
}

SeriesValue arakelov_L_partial(const ArakelovSeriesSpec& spec, Real eps, std::vector<ArakelovTerm>* terms) {
  validate(spec);
  if (!(eps > 0)) throw ValidationError("eps must be positive");
  const auto points = base_points(spec, spec.cutoff);
  SeriesValue out;
  out.terms_used = points.size();
  if (points.empty()) return out;

  RestrictionCache cache(spec, eps / static_cast<Real>(points.size()));
  ComplexSum sum;
  const MetrizedLineBundle base{1, 1, spec.arch};
  for (const auto& b : points) {
    const Restriction& r = cache.get(b);
    const Term t = make_term(r, spec.s);
    sum.add(t.value);
    out.error_bound += t.error;
    if (terms) terms->push_back({b, height_point(base, b), r.vol, r.phi, t.value, t.error});
  }
  out.value = sum.value();
  return out;
}

ArakelovSeriesSpec dual_spec(const ArakelovSeriesSpec& spec) {
  ArakelovSeriesSpec d = spec;
  for (auto& m : d.bundle_degrees) m = -m;
  d.s = Real(1) - spec.s;
  return d;
}

DualityCheck theta_duality_defect(const ArakelovSeriesSpec& spec, Real eps) {
  if (spec.phi_kind != PhiKind::THETA) throw ValidationError("duality check needs the theta kind");
  DualityCheck c;
  c.lhs = arakelov_L_partial(spec, eps);
  c.rhs = arakelov_L_partial(dual_spec(spec), eps);
  c.defect = std::abs(c.lhs.value - c.rhs.value);
  c.bound = c.lhs.error_bound + c.rhs.error_bound;
  return c;
}

GroupedSeries grouped_series_coefficients(const std::vector<long>& degrees, Complex s, std::uint64_t n_max, Real eps) {
  if (n_max < 1) throw ValidationError("N_max must be at least 1");
  ArakelovSeriesSpec spec;
  spec.bundle_degrees = degrees;
  spec.arch = ArchMetricKind::MAX;
  spec.s = s;
  spec.cutoff = n_max;
  spec.phi_kind = PhiKind::THETA;

  std::vector<ArakelovTerm> terms;
  GroupedSeries g;
  g.direct = arakelov_L_partial(spec, eps, &terms);

  // Terms arrive sorted by N and every b of a given N has the same restriction.
  ComplexSum grouped;
  for (std::size_t i = 0; i < terms.size();) {
    const BigInt N = terms[i].b.max_abs();
    std::size_t j = i;
    while (j < terms.size() && terms[j].b.max_abs() == N) ++j;
    GroupedCoefficient c;
    c.N = N.get_ui();
    c.count = j - i;
    c.printed_count = 2 * (1 + 2 * euler_phi(c.N));
    c.theta = terms[i].phi.real();
    c.term = terms[i].term;
    grouped.add(c.term, BigInt(static_cast<unsigned long>(c.count)));
    g.coefficients.push_back(c);
    i = j;
  }
  g.grouped_sum = grouped.value();
  g.exact_match = g.grouped_sum == g.direct.value;
  return g;
}

std::vector<ProbeRow> convergence_abscissa_probe(const ArakelovSeriesSpec& spec, const std::vector<Complex>& s_grid,
                                                 Real eps) {
  validate(spec);
  if (spec.phi_kind != PhiKind::THETA) throw ValidationError("the probe needs the theta kind");
  if (spec.cutoff > std::numeric_limits<std::uint64_t>::max() / 4) throw ValidationError("cutoff too large");
  const auto points = base_points(spec, 4 * spec.cutoff);
  RestrictionCache cache(spec, eps / static_cast<Real>(std::max<std::size_t>(points.size(), 1)));

  std::vector<ProbeRow> rows;
  for (const Complex s : s_grid) {
    ComplexSum parts[3];
    for (const auto& b : points) {
      const Complex t = make_term(cache.get(b), s).value;
      for (int k = 0; k < 3; ++k)
        if (within(b, spec.arch, spec.cutoff << k)) parts[k].add(t);
    }
    ProbeRow row;
    row.s = s;
    row.partial_b = parts[0].value();
    row.partial_2b = parts[1].value();
    row.partial_4b = parts[2].value();
    const Real d1 = std::abs(row.partial_2b - row.partial_b);
    const Real d2 = std::abs(row.partial_4b - row.partial_2b);
    row.growth_exponent = d1 > 0 && d2 > 0 ? std::log2(d2 / d1) : -std::numeric_limits<Real>::infinity();
    row.convergent = row.growth_exponent < 0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace heightkit
