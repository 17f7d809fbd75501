#include "heightkit/fibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "heightkit/counts.hpp"
#include "heightkit/errors.hpp"
#include "heightkit/places.hpp"

namespace heightkit {

namespace {

// Largest integer r >= 0 with r^k <= x (x >= 0).
BigInt root_floor(const Rat& x, long k) {
  if (sgn(x) < 0) return -1;
  const BigInt f = x.get_num() / x.get_den();  // floor for x >= 0
  BigInt r;
  mpz_root(r.get_mpz_t(), f.get_mpz_t(), static_cast<unsigned long>(k));
  return r;
}

Rat rmax(const Rat& a, const Rat& b) { return a < b ? b : a; }

Rat big_pow(const BigInt& b, long e) { return rat_pow(Rat(b), e); }

ExactReal combine(const Rat& fiber, bool squared, long k, const Rat& base_factor) {
  // fiber is M (MAX) or M^2 (L2).
  const ExactReal m = squared ? l2_power(fiber, k) : ExactReal::from_rat(rat_pow(fiber, k));
  if (m.exact) return ExactReal::from_rat(*m.exact * base_factor);
  return ExactReal::from_real(m.value * to_real(base_factor));
}

std::int64_t to_int64(const BigInt& x) {
  if (!x.fits_slong_p()) throw CapacityError("coordinate does not fit in 64 bits");
  return x.get_si();
}

}  // namespace

HirzebruchSurface HirzebruchSurface::make(long n) {
  return {n < 0 ? -n : n, n < 0};
}

FnPoint FnPoint::from_cox(const HirzebruchSurface& Y, const IntVector& uvst) {
  if (uvst.size() != 4) throw ValidationError("a point of F_n needs four Cox coordinates u v s t");
  std::int64_t u = uvst[0], v = uvst[1], s = uvst[2], t = uvst[3];
  if (Y.fiber_swapped) std::swap(s, t);
  if (u == 0 && v == 0) throw ValidationError("base coordinates (u, v) are both zero");
  if (s == 0 && t == 0) throw ValidationError("fiber coordinates (s, t) are both zero");
  const ProjPoint base = ProjPoint::from_ints({u, v});
  // base = (u, v) / l with l = +-gcd; t scales by l^n.
  const BigInt lambda = (u != 0 ? BigInt(u) : BigInt(v)) / (u != 0 ? base.coords()[0] : base.coords()[1]);
  const Rat t_scaled = Rat(BigInt(t)) / big_pow(lambda, Y.n);
  const ProjPoint fiber = ProjPoint::from_rats({Rat(BigInt(s)), t_scaled});
  return {base, to_int64(fiber.coords()[0]), to_int64(fiber.coords()[1])};
}

std::string FnPoint::to_string() const {
  return "(" + base.coords()[0].get_str() + ":" + base.coords()[1].get_str() + "),(" + std::to_string(s) + "," +
         std::to_string(t) + ")";
}

ExactReal height_Fn(const HirzebruchSurface& Y, const FibrationLineClass& c, const FnPoint& P, ArchMetricKind arch) {
  const BigInt N = P.base.max_abs();
  const Rat frame = big_pow(N, -Y.n);  // norm of the O(n) generator at b
  const Rat s(BigInt(P.s)), t = Rat(BigInt(P.t)) * frame;
  const Rat base = big_pow(N, c.base_exponent(Y.n));
  if (arch == ArchMetricKind::MAX) return combine(rmax(abs(s), abs(t)), false, c.k, base);
  return combine(s * s + t * t, true, c.k, base);
}

ExactReal height_Fn_in_chart(const HirzebruchSurface& Y, const FibrationLineClass& c, const FnPoint& P,
                             ArchMetricKind arch, Chart chart) {
  const Rat u(P.base.coords()[0]), v(P.base.coords()[1]);
  const Rat& pivot = chart == Chart::V ? v : u;
  if (sgn(pivot) == 0) throw ValidationError("point lies outside the requested chart");
  const Rat z = (chart == Chart::V ? u : v) / pivot;
  const Rat s(BigInt(P.s)), tc = Rat(BigInt(P.t)) / rat_pow(pivot, Y.n);

  std::set<BigInt> primes;
  for (const Rat* x : {&z, &s, &tc})
    if (sgn(*x) != 0)
      for (const auto& p : support(*x)) primes.insert(p);

  Rat fiber = 1, base = 1;
  for (const auto& p : primes) {
    const Rat zb = rmax(Rat(1), abs_p(z, p));
    fiber *= rmax(abs_p(s, p), abs_p(tc, p) / rat_pow(zb, Y.n));
    base *= zb;
  }
  const Rat zb = rmax(Rat(1), abs(z));
  base *= zb;
  const Rat t_inf = abs(tc) / rat_pow(zb, Y.n);
  const Rat base_factor = rat_pow(base, c.base_exponent(Y.n));
  if (arch == ArchMetricKind::MAX) return combine(fiber * rmax(abs(s), t_inf), false, c.k, base_factor);
  return combine(fiber * fiber * (s * s + t_inf * t_inf), true, c.k, base_factor);
}

ExactReal fiber_lattice_height(const HirzebruchSurface& Y, const FnPoint& P, ArchMetricKind arch) {
  const HermitianLattice E = restrict_bundle_sum({0, Y.n}, ArchMetricKind::MAX, P.base);
  const IntVector x{P.s, P.t};
  if (arch == ArchMetricKind::L2) return l2_power(E.norm_sq_exact(x), 1);
  Rat m = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    const Rat scale = exact_sqrt((*E.exact_gram())(i, i)).value();
    m = rmax(m, scale * abs(Rat(BigInt(x[i]))));
  }
  return ExactReal::from_rat(m);
}

std::pair<ExactReal, ExactReal> character_shift_invariance(const HirzebruchSurface& Y, const FibrationLineClass& c,
                                                           const FnPoint& P, ArchMetricKind arch) {
  return {height_Fn(Y, c, P, arch), height_Fn(Y, {c.k, c.w + 1, c.j - Y.n}, P, arch)};
}

bool is_effective(const HirzebruchSurface& Y, const FibrationLineClass& c) {
  return c.k >= 0 && c.base_exponent(Y.n) >= 0;
}

FibrationLineClass anticanonical_class(const HirzebruchSurface&) { return {2, 1, 2}; }

bool on_exceptional_section(const FnPoint& P) { return P.s == 0; }

std::vector<FnPoint> enumerate_Fn(const HirzebruchSurface& Y, const FibrationLineClass& c, ArchMetricKind arch,
                                  const Rat& bound, const FnEnumerationOptions& options) {
  const long e = c.base_exponent(Y.n);
  if (c.k < 1 || e < 1) throw ValidationError("enumeration needs k >= 1 and n w + j >= 1");
  std::vector<FnPoint> out;
  if (bound < 1) return out;

  const BigInt n_max = root_floor(bound, e);
  for (const auto& b : enumerate_Pn({1, 1, ArchMetricKind::MAX}, Rat(n_max))) {
    const BigInt N = b.max_abs();
    const Rat rest = bound / big_pow(N, e);  // M^k <= rest
    const Rat Nn = big_pow(N, Y.n);
    const std::int64_t s_max = to_int64(root_floor(rest, c.k));
    const std::int64_t t_max = to_int64(root_floor(rest * rat_pow(Nn, c.k), c.k));
    const Rat rest_sq = rest * rest;
    for (std::int64_t s = 0; s <= s_max; ++s) {
      if (s == 0 && options.exclude_exceptional) continue;
      for (std::int64_t t = s == 0 ? 1 : -t_max; t <= (s == 0 ? 1 : t_max); ++t) {
        if (std::gcd(s, t) != 1) continue;
        const Rat tn = Rat(BigInt(t)) / Nn;
        bool keep;
        if (arch == ArchMetricKind::MAX) {
          keep = rat_pow(rmax(Rat(s), abs(tn)), c.k) <= rest;
        } else {
          keep = rat_pow(Rat(s * s) + tn * tn, c.k) <= rest_sq;
        }
        if (!keep) continue;
        if (out.size() >= options.cap) throw CapacityError("more than " + std::to_string(options.cap) + " points below the bound");
        out.push_back({b, s, t});
      }
    }
  }
  return out;
}

}  // namespace heightkit
