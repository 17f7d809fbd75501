#include <cmath>
#include <random>

#include "doctest.h"
#include "heightkit/errors.hpp"
#include "heightkit/lattice.hpp"
#include "heightkit/special.hpp"
#include "test_util.hpp"

using namespace heightkit;
using special::kPi;

namespace {

HermitianLattice diag(std::initializer_list<Rat> d) { return HermitianLattice::from_rational(RatMatrix::diagonal(d)); }

// 1 + 2 sum_{k>=1} exp(-pi t k^2), summed far past double-exponential decay.
Real classical_theta(Real t) {
  Real s = 0;
  for (int k = 60; k >= 1; --k) s += std::exp(-kPi * t * k * k);
  return 1 + 2 * s;
}

}  // namespace

TEST_CASE("covolume examples") {
  CHECK(vol(HermitianLattice::unit(3)).exact == Rat(1));
  CHECK(vol(diag({Rat(1, 9)})).exact == Rat(1, 3));
  CHECK(vol(diag({Rat(1), Rat(1, 16)})).exact == Rat(1, 4));
  CHECK_FALSE(vol(diag({Rat(2)})).exact.has_value());
  CHECK(std::fabs(vol(diag({Rat(2)})).value - std::sqrt(2.0L)) < 1e-18L);
}

TEST_CASE("arithmetic degree") {
  CHECK(arithmetic_degree(HermitianLattice::unit(2)) == 0);
  CHECK(std::fabs(arithmetic_degree(diag({Rat(1, 9)})) - std::log(3.0L)) < 1e-18L);
  const auto l = testutil::random_lattice(3, 99);
  CHECK(std::fabs(arithmetic_degree(dual(l)) + arithmetic_degree(l)) < 1e-15L);
}

TEST_CASE("dual and direct sum") {
  CHECK(dual(HermitianLattice::unit(3)) == HermitianLattice::unit(3));
  CHECK(dual(diag({Rat(4)})) == diag({Rat(1, 4)}));
  CHECK(direct_sum(HermitianLattice::unit(1), HermitianLattice::unit(1)) == HermitianLattice::unit(2));
  CHECK(direct_sum(diag({Rat(1)}), diag({Rat(1, 4)})) == diag({Rat(1), Rat(1, 4)}));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = testutil::random_lattice(1 + seed % 4, seed);
    const auto b = testutil::random_lattice(1 + (seed + 1) % 3, seed + 100);
    REQUIRE(dual(dual(a)) == a);
    REQUIRE(vol(direct_sum(a, b)).value == doctest::Approx(double(vol(a).value * vol(b).value)).epsilon(1e-15));
    REQUIRE(std::fabs(vol(a).value * vol(dual(a)).value - 1) < 1e-17L);
  }
}

TEST_CASE("invalid Gram matrices are rejected") {
  CHECK_THROWS_AS(HermitianLattice::from_rational(RatMatrix{{Rat(1), Rat(2)}, {Rat(2), Rat(1)}}), ValidationError);
  CHECK_THROWS_AS(HermitianLattice::from_rational(RatMatrix{{Rat(1), Rat(0)}, {Rat(1), Rat(1)}}), ValidationError);
  CHECK_THROWS_AS(HermitianLattice::from_real(RealMatrix{{-1.0L}}), ValidationError);
}

TEST_CASE("enumerate_vectors examples") {
  CHECK(enumerate_vectors(HermitianLattice::unit(2), 1).size() == 5);
  const auto one = enumerate_vectors(HermitianLattice::unit(1), 2.5L);
  CHECK(one == std::vector<IntVector>{{-2}, {-1}, {0}, {1}, {2}});
  CHECK_THROWS_AS(enumerate_vectors(HermitianLattice::unit(3), 10, 100), CapacityError);
}

TEST_CASE("enumeration matches a brute-force box scan") {
  // diag(1, 1/4), R = 1: brute force over |x_i| <= 4
  const auto l = diag({Rat(1), Rat(1, 4)});
  std::vector<IntVector> brute;
  for (long a = -4; a <= 4; ++a)
    for (long b = -4; b <= 4; ++b)
      if (Rat(a * a) + Rat(b * b, 4) <= 1) brute.push_back({a, b});
  CHECK(brute.size() == 7);
  CHECK(enumerate_vectors(l, 1) == brute);

  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto lat = testutil::random_lattice(1 + seed % 3, seed + 7);
    const Real radius = 2.2L;
    std::vector<IntVector> expect;
    const int box = 6;
    const Rat r2 = rat_from_real(radius) * rat_from_real(radius);
    IntVector x(lat.rank(), -box);
    while (true) {
      if (lat.norm_sq_exact(x) <= r2) expect.push_back(x);
      std::size_t i = 0;
      while (i < x.size() && x[i] == box) x[i++] = -box;
      if (i == x.size()) break;
      ++x[i];
    }
    std::sort(expect.begin(), expect.end());
    REQUIRE(enumerate_vectors(lat, radius) == expect);
  }
}

TEST_CASE("theta of Z at t = 1 matches direct summation") {
  const SeriesValue v = theta(HermitianLattice::unit(1), 1, 1e-12L);
  CHECK(std::fabs(v.value.real() - classical_theta(1)) <= v.error_bound + 1e-18L);
  CHECK(v.error_bound < 1e-12L);
  CHECK(v.rigorous);
  CHECK(std::fabs(v.value.real() - 1.0864348112133080146L) < 1e-12L);
}

TEST_CASE("theta tends to one for large t and respects change of variables") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto l = testutil::random_lattice(1 + seed % 4, seed);
    const SeriesValue v = theta(l, 50, 1e-12L);
    CHECK(v.value.real() >= 1);
    CHECK(v.value.real() <= 1 + 1e-12L);
  }
  for (long n : {2L, 3L, 7L}) {
    const SeriesValue a = theta(diag({Rat(n * n)}), 1, 1e-14L);
    const SeriesValue b = theta(HermitianLattice::unit(1), Real(n * n), 1e-14L);
    CHECK(std::fabs(a.value.real() - b.value.real()) <= a.error_bound + b.error_bound);
    CHECK(std::fabs(a.value.real() - classical_theta(Real(n * n))) <= a.error_bound);
  }
}

TEST_CASE("theta truncation is monotone in the radius") {
  const auto l = testutil::random_lattice(3, 5);
  Real previous = 0;
  for (Real r2 : {0.5L, 1.0L, 2.0L, 4.0L, 8.0L}) {
    Real sum = 0;
    for_each_vector(l, r2, [&](const IntVector&, Real q) { sum += std::exp(-kPi * q); });
    CHECK(sum >= previous);
    previous = sum;
  }
}

TEST_CASE("theta functional equation examples") {
  const auto z = theta_functional_equation_defect(HermitianLattice::unit(1), 1);
  CHECK(z.defect <= z.bound);
  CHECK(z.defect < 1e-15L);
  const auto two = theta_functional_equation_defect(diag({Rat(4)}), 1);
  CHECK(two.defect < 1e-10L);
  const auto r3 = theta_functional_equation_defect(testutil::random_lattice(3, 2024), Real(1) / 3);
  CHECK(r3.defect < 1e-9L);
}

TEST_CASE("theta functional equation on random lattices") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto l = testutil::random_lattice(1 + seed % 4, 1000 + seed);
    for (Real t : {Real(1) / 3, Real(1), Real(2)}) {
      const auto chk = theta_functional_equation_defect(l, t);
      REQUIRE(chk.defect <= chk.bound);
    }
  }
}

TEST_CASE("Lambda(Z, 2) = pi / 3 and zeta(Z, s) = 2 zeta(s)") {
  const auto z = HermitianLattice::unit(1);
  CHECK(std::abs(completed_lambda(z, 2).value - Complex(kPi / 3)) < 1e-15L);
  CHECK(std::abs(lattice_zeta(z, 2).value - Complex(kPi * kPi / 3)) < 1e-14L);
  CHECK(std::abs(lattice_zeta(z, 4).value - Complex(std::pow(kPi, 4) / 45)) < 1e-14L);
  // zeta(0) = -1/2 for Riemann zeta, hence zeta(Z, -1) = 2 zeta(-1) = -1/6
  CHECK(std::abs(lattice_zeta(z, -1).value - Complex(-1.0L / 6)) < 1e-13L);
  CHECK(std::abs(lattice_zeta(z, -2).value) < 1e-15L);
  CHECK_THROWS_AS(completed_lambda(z, 0), PoleError);
  CHECK_THROWS_AS(completed_lambda(z, 1), PoleError);
}

TEST_CASE("Lambda residues match -2 sqrt(vol) and 2 / sqrt(vol)") {
  // s Lambda(s) = -2 sqrt(vol) + c0 s + c1 s^2 + ...; the symmetric average cancels c0.
  const Real h = 1e-4L;
  auto residue_at = [&](const HermitianLattice& l, Real pole) {
    const Complex plus = h * completed_lambda(l, pole + h).value;
    const Complex minus = -h * completed_lambda(l, pole - h).value;
    return (plus + minus) / Real(2);
  };
  CHECK(std::abs(residue_at(HermitianLattice::unit(1), 0) + Real(2)) < 1e-6L);
  // For Z the first-order coefficient is gamma + log(pi) - 2 log(2 pi).
  const Real c0 = special::kEulerGamma + std::log(kPi) - 2 * std::log(2 * kPi);
  const Complex one_sided = h * completed_lambda(HermitianLattice::unit(1), h).value + Real(2);
  CHECK(std::abs(one_sided - Complex(c0 * h)) < 1e-7L);
  for (std::size_t d = 1; d <= 3; ++d) {
    const auto l = testutil::random_lattice(d, 50 + d);
    const Real root = std::sqrt(vol(l).value);
    CHECK(std::abs(residue_at(l, 0) + 2 * root) < 1e-6L);
    CHECK(std::abs(residue_at(l, Real(d)) - 2 / root) < 1e-6L);
  }
}

TEST_CASE("Lambda functional equation") {
  const auto z = HermitianLattice::unit(1);
  const Complex s(0.3L, 0.7L);
  CHECK(std::abs(completed_lambda(z, s, 1e-13L).value - completed_lambda(z, Real(1) - s, 1e-13L).value) < 1e-10L);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto l = testutil::random_lattice(1 + seed % 3, 300 + seed);
    const Real d = static_cast<Real>(l.rank());
    for (const Complex s2 : {Complex(0.4L, 1.3L), Complex(-1.5L, 0.5L), Complex(d + 2.5L, -3)}) {
      const SeriesValue a = completed_lambda(l, s2);
      const SeriesValue b = completed_lambda(dual(l), d - s2);
      REQUIRE(std::abs(a.value - b.value) <= a.error_bound + b.error_bound);
    }
  }
}

TEST_CASE("continued zeta agrees with a direct sum far inside the half-plane of convergence") {
  // identity Gram, d = 2, s = 6: brute-force sum over |e| <= 1000; tail below 2e-12
  const long R = 1000;
  Real direct = 0;
  for (long a = -R; a <= R; ++a)
    for (long b = -R; b <= R; ++b) {
      const long q = a * a + b * b;
      if (q == 0 || q > R * R) continue;
      const Real qq = static_cast<Real>(q);
      direct += 1 / (qq * qq * qq);
    }
  const SeriesValue cont = lattice_zeta(HermitianLattice::unit(2), 6);
  CHECK(std::fabs(cont.value.real() - direct) < 1e-8L);
  CHECK(std::fabs(cont.value.imag()) < 1e-15L);
}
