#include "heightkit/selftest.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "heightkit/arakelov.hpp"
#include "heightkit/counts.hpp"
#include "heightkit/fibration.hpp"
#include "heightkit/heights.hpp"
#include "heightkit/lattice.hpp"
#include "heightkit/places.hpp"
#include "heightkit/special.hpp"
#include "heightkit/tamagawa.hpp"
#include "heightkit/twist.hpp"

namespace heightkit {

namespace {

using Rng = std::mt19937_64;

std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

Rat random_nonzero_rat(Rng& rng) {
  std::int64_t a = 0;
  while (a == 0) a = uniform(rng, -1000000, 1000000);
  Rat r(BigInt(static_cast<long>(a)), BigInt(static_cast<long>(uniform(rng, 1, 1000000))));
  r.canonicalize();
  return r;
}

HermitianLattice random_lattice(Rng& rng, std::size_t d) {
  RatMatrix g(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    g(i, i) = Rat(uniform(rng, 8, 16), 4);
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i) = Rat(uniform(rng, -2, 2), 4);
  }
  return HermitianLattice::from_rational(g);
}

ProjPoint random_point(Rng& rng, std::size_t n, std::int64_t box) {
  for (;;) {
    IntVector x(n + 1);
    bool nonzero = false;
    for (auto& c : x) nonzero |= (c = uniform(rng, -box, box)) != 0;
    if (nonzero) return ProjPoint::from_ints(x);
  }
}

bool product_formula(Rng& rng) {
  for (int i = 0; i < 1000; ++i)
    if (product_formula_check(random_nonzero_rat(rng)) != 1) return false;
  return true;
}

bool theta_functional_equation(Rng& rng) {
  for (int i = 0; i < 10; ++i) {
    const auto l = random_lattice(rng, 1 + i % 3);
    const auto c = theta_functional_equation_defect(l, i % 2 ? Real(1) / 3 : Real(2));
    if (!(c.defect <= c.bound)) return false;
  }
  return true;
}

bool lambda_duality(Rng& rng) {
  for (int i = 0; i < 4; ++i) {
    const auto l = random_lattice(rng, 1 + i % 2);
    const Complex s(0.3L + 0.2L * i, 0.7L);
    const Complex d = static_cast<Real>(l.rank());
    const auto a = completed_lambda(l, s);
    const auto b = completed_lambda(dual(l), d - s);
    if (!(std::abs(a.value - b.value) < 1e-9L)) return false;
  }
  return std::fabs(completed_lambda(HermitianLattice::unit(1), 2).value.real() - special::kPi / 3) < 1e-10L;
}

bool identity_twist(Rng& rng) {
  for (int i = 0; i < 50; ++i) {
    const MetrizedLineBundle L{2, 1 + i % 3, i % 2 ? ArchMetricKind::L2 : ArchMetricKind::MAX};
    const auto x = random_point(rng, 2, 50);
    const auto a = twisted_height(L, AdelicGroupElement::identity(3), x);
    const auto b = height_point(L, x);
    if (a.value != b.value || a.exact != b.exact) return false;
  }
  return true;
}

bool diagonal_twist_comparison(Rng& rng) {
  for (int i = 0; i < 30; ++i) {
    const std::size_t n = 2;
    RatMatrix d = RatMatrix::identity(n + 1);
    for (std::size_t k = 0; k <= n; ++k) d(k, k) = Rat(uniform(rng, 1, 6), uniform(rng, 1, 6));
    const auto g = AdelicGroupElement::identity(n + 1).with(Place::finite(BigInt(uniform(rng, 0, 1) ? 2 : 3)), d);
    Exponents e(n + 1, 0);
    e[static_cast<std::size_t>(uniform(rng, 0, n))] = 1;
    const auto s = Form::monomial(e);
    auto x = random_point(rng, n, 30);
    while (s.evaluate(x.as_rats()) == 0) x = random_point(rng, n, 30);
    const auto c = compare_twisted({n, 1, ArchMetricKind::MAX}, g, s, x);
    if (!c.lhs.exact || c.lhs.exact != c.rhs.exact) return false;
  }
  return true;
}

bool fibration_shift(Rng& rng) {
  for (int i = 0; i < 200; ++i) {
    const auto Y = HirzebruchSurface::make(uniform(rng, 0, 3));
    const FibrationLineClass c{uniform(rng, 0, 3), uniform(rng, -2, 2), uniform(rng, 0, 4)};
    IntVector uvst(4, 0);
    while (uvst[0] == 0 && uvst[1] == 0) uvst[0] = uniform(rng, -9, 9), uvst[1] = uniform(rng, -9, 9);
    while (uvst[2] == 0 && uvst[3] == 0) uvst[2] = uniform(rng, -9, 9), uvst[3] = uniform(rng, -9, 9);
    const auto P = FnPoint::from_cox(Y, uvst);
    const auto arch = i % 2 ? ArchMetricKind::L2 : ArchMetricKind::MAX;
    const auto [a, b] = character_shift_invariance(Y, c, P, arch);
    if (a.value != b.value || a.exact != b.exact) return false;
    const auto h = height_Fn(Y, c, P, arch);
    if (P.base.coords()[0] != 0 && height_Fn_in_chart(Y, c, P, arch, Chart::U).exact != h.exact) return false;
    if (P.base.coords()[1] != 0 && height_Fn_in_chart(Y, c, P, arch, Chart::V).exact != h.exact) return false;
  }
  return true;
}

bool small_counts() {
  // Primitive pairs up to sign with max(|x|,|y|) <= 2: 8.
  return count_points({1, 1, ArchMetricKind::MAX}, 2) == 8 &&
         enumerate_Pn({1, 1, ArchMetricKind::MAX}, 2).size() == 8 &&
         count_points({2, 1, ArchMetricKind::MAX}, 1) == 13;
}

bool arakelov_grouping() {
  const auto g = grouped_series_coefficients({1}, Complex(4, 0.5L), 40);
  if (!g.exact_match) return false;
  for (const auto& c : g.coefficients)
    if (c.count != (c.N == 1 ? 4 : 4 * euler_phi(c.N))) return false;
  return true;
}

bool local_densities() {
  for (std::uint32_t p : primes_up_to(50)) {
    const BigInt bp(p);
    if (local_density_finite(Variety::Pn(1), bp) * convergence_factor(Variety::Pn(1), bp) != 1 - Rat(1, bp * bp))
      return false;
  }
  return *archimedean_density(Variety::Pn(2), ArchMetricKind::MAX).exact == 12;
}

}  // namespace

bool run_selftest(std::ostream& out) {
  Rng rng(20240601);
  const std::pair<const char*, std::function<bool()>> checks[] = {
      {"product formula", [&] { return product_formula(rng); }},
      {"theta functional equation", [&] { return theta_functional_equation(rng); }},
      {"lambda duality and Lambda(Z,2)", [&] { return lambda_duality(rng); }},
      {"identity twist", [&] { return identity_twist(rng); }},
      {"diagonal twist comparison", [&] { return diagonal_twist_comparison(rng); }},
      {"fibration shift and charts", [&] { return fibration_shift(rng); }},
      {"small point counts", small_counts},
      {"arakelov grouping", arakelov_grouping},
      {"local densities", local_densities},
  };
  bool ok = true;
  for (const auto& [name, check] : checks) {
    bool pass = false;
    try {
      pass = check();
    } catch (const std::exception& e) {
      out << "error in " << name << ": " << e.what() << "\n";
    }
    out << (pass ? "PASS " : "FAIL ") << name << "\n";
    ok &= pass;
  }
  return ok;
}

}  // namespace heightkit
