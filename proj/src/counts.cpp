#include "heightkit/counts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "heightkit/errors.hpp"

namespace heightkit {

namespace {

// Largest r >= 0 with r^m <= bound.
std::int64_t integer_root_floor(const Rat& bound, long m) {
  if (sgn(bound) < 0) return -1;
  if (m < 1) throw ValidationError("counting needs a positive degree");
  const Real guess = std::floor(std::pow(to_real(bound), 1.0L / static_cast<Real>(m)));
  if (guess > 4e18L) throw CapacityError("height bound too large for a coordinate box");
  BigInt r(static_cast<long>(guess));
  auto fits = [&](const BigInt& x) { return Rat(x) <= bound; };
  auto pw = [&](const BigInt& x) {
    BigInt y = 1;
    for (long k = 0; k < m; ++k) y *= x;
    return y;
  };
  while (fits(pw(r + 1))) ++r;
  while (sgn(r) > 0 && !fits(pw(r))) --r;
  return r.get_si();
}

// Coordinate radius: max|x_i| <= R (MAX) or sum x_i^2 <= S (L2).
struct Box {
  ArchMetricKind arch;
  std::int64_t limit;  // R or S
};

Box box_for(const MetrizedLineBundle& bundle, const Rat& bound) {
  if (bundle.m < 1) throw ValidationError("bounded-height sets need a positive degree");
  if (bundle.n < 1) throw ValidationError("projective space of dimension at least 1 expected");
  if (bundle.arch == ArchMetricKind::MAX) return {bundle.arch, integer_root_floor(bound, bundle.m)};
  // (sum x^2)^(m/2) <= H  <=>  (sum x^2)^m <= H^2
  return {bundle.arch, integer_root_floor(bound * bound, bundle.m)};
}

std::int64_t isqrt(std::int64_t v) {
  if (v < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

bool canonical_primitive(const IntVector& x) {
  std::int64_t g = 0;
  bool first = true;
  for (auto c : x) {
    if (first && c != 0) {
      if (c < 0) return false;
      first = false;
    }
    g = std::gcd(g, c < 0 ? -c : c);
  }
  return g == 1;
}

// Squarefree divisors of g with their Moebius signs, from a smallest-prime-factor sieve.
class MoebiusTable {
 public:
  explicit MoebiusTable(std::int64_t limit) : spf_(static_cast<std::size_t>(limit) + 1, 0), cache_(spf_.size()) {
    for (std::size_t i = 2; i < spf_.size(); ++i)
      if (!spf_[i])
        for (std::size_t j = i; j < spf_.size(); j += i)
          if (!spf_[j]) spf_[j] = static_cast<std::uint32_t>(i);
  }

  // #{y in [-L, L] : gcd(g, y) = 1}; g = 0 admits only y = +-1.
  std::int64_t coprime_in_interval(std::int64_t g, std::int64_t L) {
    if (L < 0) return 0;
    if (g == 0) return L >= 1 ? 2 : 0;
    if (g == 1) return 2 * L + 1;
    std::int64_t total = 0;
    for (const auto& [d, mu] : divisors(g)) total += mu * (2 * (L / d) + 1);
    return total;
  }

 private:
  const std::vector<std::pair<std::int64_t, int>>& divisors(std::int64_t g) {
    auto& out = cache_[static_cast<std::size_t>(g)];
    if (!out.empty()) return out;
    out.push_back({1, 1});
    for (std::int64_t v = g; v > 1;) {
      const std::int64_t p = spf_[static_cast<std::size_t>(v)];
      while (v % p == 0) v /= p;
      const std::size_t size = out.size();
      for (std::size_t i = 0; i < size; ++i) out.push_back({out[i].first * p, -out[i].second});
    }
    return out;
  }

  std::vector<std::uint32_t> spf_;
  std::vector<std::vector<std::pair<std::int64_t, int>>> cache_;
};

Complex zeta_term(const ExactReal& h, Complex s) { return std::exp(-s * std::log(h.value)); }

bool same_height(const ExactReal& a, const ExactReal& b) {
  if (a.exact && b.exact) return *a.exact == *b.exact;
  return a.value == b.value;
}

}  // namespace

std::vector<ProjPoint> enumerate_Pn(const MetrizedLineBundle& bundle, const Rat& bound, std::size_t cap) {
  const Box box = box_for(bundle, bound);
  const std::size_t dim = bundle.n + 1;
  std::vector<std::pair<std::int64_t, IntVector>> found;  // (max or sum of squares, coords)
  auto keep = [&](const IntVector& x, std::int64_t key) {
    if (!canonical_primitive(x)) return;
    if (found.size() >= cap) throw CapacityError("more than " + std::to_string(cap) + " points below the bound");
    found.emplace_back(key, x);
  };
  if (box.limit < 1) return {};

  if (box.arch == ArchMetricKind::MAX) {
    const std::int64_t r = box.limit;
    const long double cells = std::pow(static_cast<long double>(2 * r + 1), static_cast<long double>(dim));
    if (cells > 4e9L) throw CapacityError("coordinate box too large to scan");
    IntVector x(dim, -r);
    for (;;) {
      std::int64_t m = 0;
      for (auto c : x) m = std::max<std::int64_t>(m, c < 0 ? -c : c);
      if (m > 0) keep(x, m);
      std::size_t i = dim;
      while (i > 0 && x[i - 1] == r) x[--i] = -r;
      if (i == 0) break;
      ++x[i - 1];
    }
  } else {
    // Fincke-Pohst on the unit lattice, then the exact integer test.
    const std::int64_t s = box.limit;
    for_each_vector(
        HermitianLattice::unit(dim), static_cast<Real>(s),
        [&](const IntVector& x, Real) {
          std::int64_t q = 0;
          for (auto c : x) q += c * c;
          if (q > 0 && q <= s) keep(x, q);
        },
        std::numeric_limits<std::size_t>::max());
  }
  std::sort(found.begin(), found.end());
  std::vector<ProjPoint> out;
  out.reserve(found.size());
  for (const auto& [key, x] : found) out.push_back(ProjPoint::from_ints(x));
  return out;
}

std::uint64_t count_points(const MetrizedLineBundle& bundle, const Rat& bound) {
  const Box box = box_for(bundle, bound);
  if (box.limit < 1) return 0;
  const std::size_t prefix = bundle.n;  // coordinates scanned explicitly
  const std::int64_t radius = box.arch == ArchMetricKind::MAX ? box.limit : isqrt(box.limit);
  const long double cells = std::pow(static_cast<long double>(2 * radius + 1), static_cast<long double>(prefix));
  if (cells > 4e9L) throw CapacityError("prefix box too large to scan");
  MoebiusTable table(radius);

  std::uint64_t total = 0;
  auto rec = [&](auto&& self, std::size_t i, std::int64_t g, std::int64_t used) -> void {
    const std::int64_t room = box.arch == ArchMetricKind::MAX ? radius : isqrt(box.limit - used);
    if (i == prefix) {
      total += static_cast<std::uint64_t>(table.coprime_in_interval(g, room));
      return;
    }
    for (std::int64_t x = -room; x <= room; ++x) self(self, i + 1, std::gcd(g, x < 0 ? -x : x), used + x * x);
  };
  rec(rec, 0, 0, 0);
  return total / 2;  // x and -x are the same point
}

CountTable count_table(const MetrizedLineBundle& bundle, const std::vector<Real>& thresholds) {
  CountTable t;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0)) throw ValidationError("thresholds must be positive");
    if (i && !(thresholds[i] > thresholds[i - 1])) throw ValidationError("thresholds must be strictly increasing");
    t.thresholds.push_back(thresholds[i]);
    t.counts.push_back(count_points(bundle, rat_from_real(thresholds[i])));
  }
  return t;
}

SeriesValue height_zeta_partial(const MetrizedLineBundle& bundle, Complex s, const Rat& bound) {
  ExactSum re, im;
  Real magnitude = 0;
  const auto points = enumerate_Pn(bundle, bound);
  for (const auto& x : points) {
    const ExactReal h = height_point(bundle, x);
    const Complex t = zeta_term(h, s);
    re.add(t.real());
    im.add(t.imag());
    magnitude += std::abs(t) * (std::abs(s) * std::fabs(std::log(h.value)) + 4);
  }
  return {Complex(re.value(), im.value()), magnitude * std::numeric_limits<Real>::epsilon(), points.size(), true};
}

SeriesValue height_zeta_partial_grouped(const MetrizedLineBundle& bundle, Complex s, const Rat& bound) {
  ExactSum re, im;
  Real magnitude = 0;
  const auto points = enumerate_Pn(bundle, bound);
  for (std::size_t i = 0; i < points.size();) {
    const ExactReal h = height_point(bundle, points[i]);
    std::size_t j = i + 1;
    while (j < points.size() && same_height(height_point(bundle, points[j]), h)) ++j;
    const Complex t = zeta_term(h, s);
    const BigInt count(static_cast<unsigned long>(j - i));
    re.add(t.real(), count);
    im.add(t.imag(), count);
    magnitude += static_cast<Real>(j - i) * std::abs(t) * (std::abs(s) * std::fabs(std::log(h.value)) + 4);
    i = j;
  }
  return {Complex(re.value(), im.value()), magnitude * std::numeric_limits<Real>::epsilon(), points.size(), true};
}

Real AsymptoticFit::model(Real h) const {
  return theta * std::pow(h, a) * std::pow(std::log(h), b - 1);
}

AsymptoticFit fit_asymptotics(const CountTable& table, const FitOptions& options) {
  const std::size_t k = table.thresholds.size();
  if (k != table.counts.size()) throw ValidationError("threshold and count lists differ in length");
  if (k < 5) throw DegenerateDesignError("need at least 5 thresholds, got " + std::to_string(k));
  if (!(table.thresholds.back() >= 100 * table.thresholds.front()))
    throw DegenerateDesignError("thresholds must span at least two decades");
  if (!(options.top_fraction > 0 && options.top_fraction <= 1)) throw ValidationError("top_fraction must lie in (0, 1]");

  std::size_t used = static_cast<std::size_t>(std::ceil(options.top_fraction * static_cast<Real>(k)));
  const std::size_t unknowns = 1 + !options.pin_a + !options.pin_b;
  used = std::max(used, unknowns + 1);
  used = std::min(used, k);
  const std::size_t first = k - used;

  // rows: [log H, log log H, 1] restricted to the free unknowns; rhs log N minus pinned parts
  RealMatrix normal(unknowns, unknowns);
  RealVector rhs(unknowns, 0);
  std::vector<RealVector> rows;
  RealVector targets;
  for (std::size_t i = first; i < k; ++i) {
    const Real h = table.thresholds[i];
    if (table.counts[i] == 0) throw DegenerateDesignError("zero count inside the fitted range");
    const Real lh = std::log(h);
    if (!options.pin_b && !(lh > 0))
      throw DegenerateDesignError("log log H undefined for thresholds <= 1");
    Real y = std::log(static_cast<Real>(table.counts[i]));
    RealVector row;
    if (options.pin_a) y -= *options.pin_a * lh;
    else row.push_back(lh);
    if (options.pin_b) {
      if (*options.pin_b != 1) y -= (*options.pin_b - 1) * std::log(lh);
    } else {
      row.push_back(std::log(lh));
    }
    row.push_back(1);
    rows.push_back(row);
    targets.push_back(y);
  }
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t i = 0; i < unknowns; ++i) {
      rhs[i] += rows[r][i] * targets[r];
      for (std::size_t j = 0; j < unknowns; ++j) normal(i, j) += rows[r][i] * rows[r][j];
    }
  // Scale-free singularity test on the normal matrix.
  Real diag_product = 1;
  for (std::size_t i = 0; i < unknowns; ++i) diag_product *= normal(i, i);
  const Real det = determinant(normal);
  if (!(std::fabs(det) > 1e-14L * diag_product)) throw DegenerateDesignError("thresholds too clustered to separate the fit parameters");
  const RealVector sol = inverse(normal).apply(rhs);

  AsymptoticFit fit;
  std::size_t idx = 0;
  fit.a = options.pin_a ? *options.pin_a : sol[idx++];
  fit.b = options.pin_b ? *options.pin_b : 1 + sol[idx++];
  fit.theta = std::exp(sol[idx]);
  Real ss = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Real pred = 0;
    for (std::size_t i = 0; i < unknowns; ++i) pred += rows[r][i] * sol[i];
    ss += (pred - targets[r]) * (pred - targets[r]);
  }
  fit.residual = std::sqrt(ss / static_cast<Real>(rows.size()));
  fit.points_used = rows.size();
  return fit;
}

}  // namespace heightkit
