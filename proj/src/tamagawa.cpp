#include "heightkit/tamagawa.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "heightkit/errors.hpp"
#include "heightkit/places.hpp"
#include "heightkit/special.hpp"

namespace heightkit {

namespace {

using special::kPi;
constexpr Real kInf = std::numeric_limits<Real>::infinity();

struct Quad {
  Real value = 0;
  Real error = 0;
};

// Adaptive Gauss-Kronrod over consecutive pieces between sorted breakpoints (ends may be infinite).
template <class F>
Quad integrate(F f, std::vector<Real> points, Real tol) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  Quad q;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    Real err = 0;
    q.value += boost::math::quadrature::gauss_kronrod<Real, 31>::integrate(f, points[i], points[i + 1], 15, tol, &err);
    q.error += err * 1;
  }
  return q;
}

// Volume of the unit sphere S^(m-1) in R^m.
Real sphere_area(long m) { return 2 * std::pow(kPi, m / Real(2)) / std::tgamma(m / Real(2)); }

// integral over R^m of (1 + |y|^2)^(-(m + 2) / 2), radially; 1 for m = 0.
Quad l2_radial(long m, long power_num, Real tol) {
  // power_num / 2 is the exponent of (1 + r^2).
  if (m == 0) return {1, 0};
  auto f = [&](Real r) { return std::pow(r, Real(m - 1)) * std::pow(1 + r * r, -power_num / Real(2)); };
  Quad q = integrate(f, {0, 1, kInf}, tol);
  const Real s = sphere_area(m);
  return {q.value * s, q.error * s};
}

void check_accuracy(const Quad& q, Real quad_eps, const std::string& what) {
  if (!(q.error <= quad_eps * std::max<Real>(1, std::fabs(q.value))))
    throw QuadratureError(what + ": quadrature did not reach the requested tolerance", static_cast<double>(q.error));
}

std::vector<Real> breaks_with(std::vector<Real> b, std::optional<Real> c) {
  b.push_back(-kInf);
  b.push_back(kInf);
  if (c) b.push_back(*c);
  return b;
}

Quad fn_density(long n, ArchMetricKind arch, Real tol, std::optional<Real> excised) {
  // Fiber integral over y at base coordinate z: dy / M^2 with M = max(1, |y|/K) or sqrt(1 + y^2/K^2).
  Real worst_inner = 0;
  auto inner = [&](Real z) {
    const Real N = std::max<Real>(1, std::fabs(z));
    const Real K = std::pow(N, Real(n));
    auto g = [&](Real y) {
      const Real r = y / K;
      return arch == ArchMetricKind::MAX ? 1 / std::max<Real>(1, r * r) : 1 / (1 + r * r);
    };
    // [0, K] as y = K u and [K, inf) as y = K / u, so the panels do not depend on the scale of K.
    auto near = [&](Real u) { return K * g(K * u); };
    auto far = [&](Real u) { return u == 0 ? Real(0) : K * g(K / u) / (u * u); };
    Quad q = integrate(near, {0, 1}, tol / 10);
    const Quad q2 = integrate(far, {0, 1}, tol / 10);
    q.value += q2.value;
    q.error += q2.error;
    worst_inner = std::max(worst_inner, q.error / q.value);
    return 2 * q.value / std::pow(N, Real(n + 2));
  };
  Quad q = integrate(inner, breaks_with({-1, 0, 1}, excised), tol);
  q.error += worst_inner * q.value;
  return q;
}

Real tail_relative(const Variety& X, std::uint64_t P) {
  // -log of the omitted factors is about c sum_{m > P} m^(-e) <= c P^(1-e) / (e - 1).
  const Real e = X.kind == Variety::Kind::PN ? Real(X.n + 1) : 2;
  const Real c = X.kind == Variety::Kind::PN ? 1 : 2;
  const Real p = static_cast<Real>(P);
  return c * std::pow(p, 1 - e) / (e - 1) * (1 + 1 / p);
}

}  // namespace

Variety Variety::Pn(long n) {
  if (n < 1) throw ValidationError("P^n needs n >= 1");
  return {Kind::PN, n};
}

Variety Variety::Fn(long n) { return {Kind::FN, n < 0 ? -n : n}; }

std::string Variety::name() const {
  return (kind == Kind::PN ? "P" : "F") + std::to_string(n);
}

Rat local_density_finite(const Variety& X, const BigInt& p) {
  if (!is_prime(p)) throw ValidationError(p.get_str() + " is not prime");
  if (X.kind == Variety::Kind::FN) return rat_pow(Rat(p + 1, p), 2);
  const Rat q(p);
  return (rat_pow(q, X.n + 1) - 1) / ((q - 1) * rat_pow(q, X.n));
}

Rat convergence_factor(const Variety& X, const BigInt& p) {
  if (!is_prime(p)) throw ValidationError(p.get_str() + " is not prime");
  return rat_pow(1 - Rat(1, p), X.picard_rank());
}

ArchimedeanDensity archimedean_density(const Variety& X, ArchMetricKind arch, Real quad_eps, std::optional<Real> excised) {
  if (!(quad_eps > 0)) throw ValidationError("quad_eps must be positive");
  const long n = X.n;
  ArchimedeanDensity out;
  Quad q;
  if (X.kind == Variety::Kind::FN) {
    q = fn_density(n, arch, quad_eps / 4, excised);
  } else if (arch == ArchMetricKind::MAX) {
    // Shells of the max norm: 2^n + integral_1^inf n 2^n r^(n-1) r^(-(n+1)) dr.
    const Rat exact = rat_pow(Rat(2), n) * (n + 1);
    if (!excised) {
      out.exact = exact;
      out.value = to_real(exact);
      return out;
    }
    // Slice along x_1: the remaining n - 1 coordinates integrate to 2^(n-2) (n+1) max(1,|x_1|)^(-2).
    auto f = [](Real x) { return 1 / std::max<Real>(1, x * x); };
    q = integrate(f, breaks_with({-1, 1}, excised), quad_eps / 4);
    const Real c = to_real(exact) / 4;
    q.value *= c;
    q.error *= c;
  } else if (!excised) {
    q = l2_radial(n, n + 1, quad_eps / 4);
  } else {
    // Slice along x_1: integral over R^(n-1) of (1 + x_1^2 + |y|^2)^(-(n+1)/2) = C / (1 + x_1^2).
    const Quad c = l2_radial(n - 1, n + 1, quad_eps / 8);
    auto f = [](Real x) { return 1 / (1 + x * x); };
    const Quad slices = integrate(f, breaks_with({0}, excised), quad_eps / 8);
    q.value = c.value * slices.value;
    q.error = c.error * slices.value + c.value * slices.error;
  }
  check_accuracy(q, quad_eps, "archimedean density of " + X.name());
  out.value = q.value;
  out.error = q.error;
  return out;
}

TamagawaReport tamagawa_number(const TamagawaSpec& spec) {
  const Variety& X = spec.variety;
  if (spec.prime_cutoff < 2) throw ValidationError("prime cutoff must be at least 2");
  if (spec.prime_cutoff > std::numeric_limits<std::uint32_t>::max()) throw ValidationError("prime cutoff too large");
  for (auto p : spec.sigma_primes) {
    if (!is_prime(p)) throw ValidationError(std::to_string(p) + " in Sigma is not prime");
    if (p > spec.prime_cutoff) throw ValidationError("primes in Sigma must not exceed the cutoff");
  }
  TamagawaReport r;
  const ArchimedeanDensity mu = archimedean_density(X, spec.arch, spec.quad_eps);
  r.mu_infinity = mu.value;
  r.mu_infinity_exact = mu.exact;
  r.quadrature_error = mu.error;

  const int rank = X.picard_rank();
  for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(spec.prime_cutoff))) {
    const BigInt bp(p);
    const Rat d = local_density_finite(X, bp);
    const Rat c = convergence_factor(X, bp);
    const bool in_sigma = std::find(spec.sigma_primes.begin(), spec.sigma_primes.end(), p) != spec.sigma_primes.end();
    if (in_sigma) {
      r.euler_product *= to_real(d);
      r.l_star *= to_real(rat_pow(1 - Rat(1, bp), rank));
    } else {
      r.euler_product *= to_real(d * c);
    }
    if (r.first_factors.size() < 20) r.first_factors.push_back({p, d, c});
    ++r.primes_used;
  }
  r.tau = r.l_star * r.mu_infinity * r.euler_product;
  r.tail_estimate = r.tau * tail_relative(X, spec.prime_cutoff);
  const Real rounding = 4 * std::numeric_limits<Real>::epsilon() * static_cast<Real>(r.primes_used + 4) * r.tau;
  r.error_budget = r.quadrature_error * (r.tau / r.mu_infinity) + r.tail_estimate + rounding;
  return r;
}

ProductTheoremCheck product_theorem_check(long n, ArchMetricKind arch, std::uint64_t prime_cutoff, Real quad_eps) {
  ProductTheoremCheck c;
  c.total = tamagawa_number({Variety::Fn(n), arch, prime_cutoff, {}, quad_eps});
  c.fiber = tamagawa_number({Variety::Pn(1), arch, prime_cutoff, {}, quad_eps});
  c.base = tamagawa_number({Variety::Pn(1), ArchMetricKind::MAX, prime_cutoff, {}, quad_eps});
  c.defect = std::fabs(c.total.tau - c.fiber.tau * c.base.tau);
  c.budget = 5 * (c.total.error_budget + c.fiber.error_budget * c.base.tau + c.base.error_budget * c.fiber.tau);
  return c;
}

PeyreCheck peyre_constant_check(long n, ArchMetricKind arch, std::uint64_t prime_cutoff, Real h_bound) {
  if (n < 1) throw ValidationError("P^n needs n >= 1");
  if (!(h_bound >= 1e3L)) throw ValidationError("the anticanonical bound must be at least 1000");
  PeyreCheck out;
  const TamagawaReport tau = tamagawa_number({Variety::Pn(n), arch, prime_cutoff, {}, 1e-10L});
  out.predicted = tau.tau / static_cast<Real>(n + 1);  // alpha = 1/(n+1), beta = 1

  // Anticanonical height is H_O(n+1); 16 thresholds over the top three decades.
  const MetrizedLineBundle anticanonical{static_cast<std::size_t>(n), n + 1, arch};
  std::vector<Real> thresholds;
  for (int i = 0; i < 16; ++i) thresholds.push_back(h_bound * std::pow(Real(10), Real(-3) + Real(i) / 5));
  out.table = count_table(anticanonical, thresholds);
  FitOptions opt;
  opt.pin_a = 1;
  opt.pin_b = 1;
  out.fit = fit_asymptotics(out.table, opt);
  out.relative_gap = std::fabs(out.fit.theta - out.predicted) / out.predicted;
  return out;
}

}  // namespace heightkit
