#include <random>

#include "doctest.h"
#include "heightkit/errors.hpp"
#include "heightkit/heights.hpp"

using namespace heightkit;

namespace {

const MetrizedLineBundle kO1Max{1, 1, ArchMetricKind::MAX};

ProjPoint pt(std::initializer_list<long> c) { return ProjPoint::from_ints(IntVector(c.begin(), c.end())); }

ProjPoint random_point(std::mt19937_64& rng, std::size_t n, long box) {
  std::uniform_int_distribution<long> d(-box, box);
  for (;;) {
    IntVector c(n + 1);
    for (auto& x : c) x = d(rng);
    if (std::any_of(c.begin(), c.end(), [](long x) { return x != 0; })) return ProjPoint::from_ints(c);
  }
}

Form random_form(std::mt19937_64& rng, std::size_t vars, int degree) {
  std::uniform_int_distribution<int> coeff(-5, 5);
  Form f = Form::monomial(Exponents(vars, 0), 0);
  for (int t = 0; t < 4; ++t) {
    Exponents e(vars, 0);
    for (int k = 0; k < degree; ++k) ++e[rng() % vars];
    f = f + Form::monomial(e, Rat(coeff(rng), 1 + rng() % 3));
  }
  return f;
}

// Product of ||s||_v(x_v)^(-1) over infinity and every prime below `limit`, by definition.
Rat brute_adelic_height(const MetrizedLineBundle& b, const Section& s, const AdelicPoint& x, std::uint32_t limit) {
  Rat total = 1;
  for (std::uint32_t p : primes_up_to(limit)) {
    const Place v = Place::finite(p);
    const RatVector* o = x.override_at(v);
    total /= *local_norm(b, s, v, o ? *o : x.base.as_rats()).exact;
  }
  const RatVector* o = x.override_at(Place::infinite());
  return total / *local_norm(b, s, Place::infinite(), o ? *o : x.base.as_rats()).exact;
}

}  // namespace

TEST_CASE("canonical representatives") {
  CHECK(pt({4, 6}).coords() == BigIntVector{2, 3});
  CHECK(pt({0, -3, 6}).coords() == BigIntVector{0, 1, -2});
  CHECK(ProjPoint::from_rats({Rat(1, 2), Rat(-1, 3)}).coords() == BigIntVector{3, -2});
  CHECK_THROWS_AS(pt({0, 0}), ValidationError);
}

TEST_CASE("height_point examples") {
  CHECK(height_point(kO1Max, pt({2, 3})).exact == Rat(3));
  CHECK(height_point({1, 2, ArchMetricKind::MAX}, pt({4, 6})).exact == Rat(9));
  CHECK(height_point({2, 1, ArchMetricKind::MAX}, pt({1, 0, 0})).exact == Rat(1));
  CHECK(height_point({1, 2, ArchMetricKind::L2}, pt({1, 2})).exact == Rat(5));
  CHECK(height_point({1, 1, ArchMetricKind::L2}, pt({3, 4})).exact == Rat(5));
  CHECK(std::fabs(height_point({1, 1, ArchMetricKind::L2}, pt({1, 1})).value - std::sqrt(2.0L)) < 1e-18L);
  CHECK(height_point({1, -1, ArchMetricKind::MAX}, pt({2, 3})).exact == Rat(1, 3));
}

TEST_CASE("height_adelic without overrides is section independent") {
  std::mt19937_64 rng(11);
  int checked = 0;
  while (checked < 50) {
    const std::size_t n = 1 + rng() % 3;
    const MetrizedLineBundle b{n, 1 + static_cast<long>(rng() % 3), ArchMetricKind::MAX};
    const ProjPoint x = random_point(rng, n, 9);
    const Form s1 = random_form(rng, n + 1, static_cast<int>(b.m));
    const Form s2 = random_form(rng, n + 1, static_cast<int>(b.m));
    if (s1.is_zero() || s2.is_zero() || s1.evaluate(x.as_rats()) == 0 || s2.evaluate(x.as_rats()) == 0) continue;
    const AdelicPoint a{x, {}};
    const ExactReal h1 = height_adelic(b, s1, a);
    REQUIRE(h1.exact == height_adelic(b, s2, a).exact);
    REQUIRE(h1.exact == height_point(b, x).exact);
    // and against the definition summed over every relevant prime
    REQUIRE(*h1.exact == brute_adelic_height(b, s1, a, 2000));
    ++checked;
  }
}

TEST_CASE("height_adelic with overrides, by hand") {
  const AdelicPoint x{pt({1, 1}), {{Place::finite(2), {Rat(1, 2), Rat(1)}}}};
  // s = x0: at 2, |1/2|_2 / max(|1/2|_2, |1|_2) = 2/2 = 1; at infinity 1/1; elsewhere 1.
  CHECK(height_adelic(kO1Max, Form::variable(0, 2), x).exact == Rat(1));
  // s = x1: at 2, |1|_2 / 2 = 1/2, so the inverse contributes 2.
  CHECK(height_adelic(kO1Max, Form::variable(1, 2), x).exact == Rat(2));

  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    const ProjPoint base = random_point(rng, 2, 6);
    AdelicPoint a{base, {}};
    for (long p : {3L, 7L}) a.overrides[Place::finite(p)] = {Rat(long(rng() % 9) - 4, 1 + rng() % 8), Rat(1 + long(rng() % 5)), Rat(long(rng() % 7), 3)};
    a.overrides[Place::infinite()] = {Rat(1), Rat(-2, 3), Rat(5, 7)};
    const MetrizedLineBundle b{2, 2, ArchMetricKind::MAX};
    const Form s = Form::monomial({1, 1, 0}) + Form::monomial({0, 0, 2}, 3);
    bool vanishes = s.evaluate(base.as_rats()) == 0;
    for (const auto& [v, vec] : a.overrides) vanishes = vanishes || s.evaluate(vec) == 0;
    if (vanishes) {
      CHECK_THROWS_AS(height_adelic(b, s, a), ZeroSectionError);
      continue;
    }
    REQUIRE(*height_adelic(b, s, a).exact == brute_adelic_height(b, s, a, 2000));
  }
}

TEST_CASE("zero section reports the place") {
  const AdelicPoint x{pt({1, 1}), {{Place::finite(5), {Rat(0), Rat(1)}}}};
  try {
    height_adelic(kO1Max, Form::variable(0, 2), x);
    FAIL("expected ZeroSectionError");
  } catch (const ZeroSectionError& e) {
    CHECK(e.place() == "5");
  }
}

TEST_CASE("multiplicativity and scaling invariance") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + rng() % 3;
    const ProjPoint x = random_point(rng, n, 50);
    for (ArchMetricKind k : {ArchMetricKind::MAX, ArchMetricKind::L2}) {
      const long m1 = 1 + long(rng() % 3), m2 = 1 + long(rng() % 3);
      const auto h1 = height_point({n, m1, k}, x), h2 = height_point({n, m2, k}, x), h = height_point({n, m1 + m2, k}, x);
      if (h.exact && h1.exact && h2.exact) REQUIRE(*h.exact == *h1.exact * *h2.exact);
      else REQUIRE(std::fabs(h.value - h1.value * h2.value) <= 1e-17L * h.value);
    }
    BigIntVector scaled = x.coords();
    for (auto& c : scaled) c *= -7;
    REQUIRE(height_point({n, 2, ArchMetricKind::MAX}, ProjPoint::from_coords(scaled)).exact == height_point({n, 2, ArchMetricKind::MAX}, x).exact);
  }
}

TEST_CASE("restrict_to_point examples") {
  const auto l = restrict_to_point(kO1Max, pt({2, 3}));
  CHECK(l.exact_gram() == RatMatrix{{Rat(1, 9)}});
  CHECK(vol(l).exact == Rat(1, 3));
  CHECK(restrict_to_point({1, 0, ArchMetricKind::MAX}, pt({5, 7})) == HermitianLattice::unit(1));
  const auto neg = restrict_to_point({1, -1, ArchMetricKind::MAX}, pt({2, 3}));
  CHECK(vol(neg).exact == Rat(3));
  CHECK(neg == dual(l));
  CHECK(restrict_bundle_sum({0, 1}, ArchMetricKind::MAX, pt({1, 2})) ==
        HermitianLattice::from_rational(RatMatrix::diagonal({Rat(1), Rat(1, 4)})));
  CHECK(restrict_bundle_sum({0}, ArchMetricKind::L2, pt({3, 4})) == HermitianLattice::unit(1));
}

TEST_CASE("restriction covolume matches the height") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 1 + rng() % 2;
    const ProjPoint b = random_point(rng, n, 30);
    for (ArchMetricKind k : {ArchMetricKind::MAX, ArchMetricKind::L2}) {
      const MetrizedLineBundle bundle{n, 2, k};
      REQUIRE(vol(restrict_to_point(bundle, b)).exact == Rat(1) / *height_point(bundle, b).exact);
      const auto sum = restrict_bundle_sum({1, 2, -1}, k, b);
      const auto parts = direct_sum(direct_sum(restrict_to_point({n, 1, k}, b), restrict_to_point({n, 2, k}, b)),
                                    restrict_to_point({n, -1, k}, b));
      REQUIRE(sum == parts);
      REQUIRE(std::fabs(arithmetic_degree(restrict_to_point({n, 1, k}, b)) - std::log(height_point({n, 1, k}, b).value)) < 1e-15L);
    }
  }
}

TEST_CASE("fiber generator oracle for O(1), O(2) on P1") {
  // The image of H^0(P^1_Z, O(m)) in the fiber at b is generated by gcd of the monomial
  // values; its archimedean length is gcd / max|b_i|^m.
  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    const ProjPoint b = random_point(rng, 1, 1000);
    for (long m : {1L, 2L}) {
      BigInt g = 0;
      for (long a = 0; a <= m; ++a) {
        BigInt v = 1;
        for (long k = 0; k < a; ++k) v *= b.coords()[0];
        for (long k = a; k < m; ++k) v *= b.coords()[1];
        g = gcd(g, v);
      }
      REQUIRE(g == 1);
      const Rat length = Rat(g) / rat_pow(Rat(b.max_abs()), m);
      REQUIRE(restrict_to_point({1, m, ArchMetricKind::MAX}, b).exact_gram() == RatMatrix{{length * length}});
    }
  }
}

TEST_CASE("forms: parsing, substitution") {
  const Form f = parse_form("x0^2*x1 - 3/2*x1^3 + 2*x0*x1*x2", 3);
  CHECK(f.degree() == 3);
  CHECK(f.evaluate(RatVector{Rat(1), Rat(2), Rat(3)}) == Rat(2 - 12 + 12));
  CHECK_THROWS_AS(parse_form("x0 + x1^2", 2), ValidationError);
  CHECK_THROWS_AS(parse_form("x5", 2), ValidationError);
  const RatMatrix a{{Rat(1), Rat(2), Rat(0)}, {Rat(0), Rat(1), Rat(-1)}, {Rat(3), Rat(0), Rat(1, 2)}};
  const RatVector x{Rat(2, 3), Rat(-1), Rat(5)};
  CHECK(f.substitute(a).evaluate(x) == f.evaluate(a.apply(x)));
  CHECK(parse_form(f.to_string(), 3) == f);
}
