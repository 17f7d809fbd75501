#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "heightkit/counts.hpp"
#include "heightkit/errors.hpp"
#include "heightkit/fibration.hpp"

using namespace heightkit;

namespace {

FnPoint fp(const HirzebruchSurface& Y, std::int64_t u, std::int64_t v, std::int64_t s, std::int64_t t) {
  return FnPoint::from_cox(Y, {u, v, s, t});
}

FnPoint random_fn_point(std::mt19937_64& rng, const HirzebruchSurface& Y, std::int64_t box, bool avoid_axes = false) {
  std::uniform_int_distribution<std::int64_t> d(-box, box);
  for (;;) {
    const std::int64_t u = d(rng), v = d(rng), s = d(rng), t = d(rng);
    if ((u == 0 && v == 0) || (s == 0 && t == 0)) continue;
    if (avoid_axes && (u == 0 || v == 0)) continue;
    return fp(Y, u, v, s, t);
  }
}

bool same(const ExactReal& a, const ExactReal& b) {
  if (a.exact || b.exact) return a.exact && b.exact && *a.exact == *b.exact;
  return a.value == b.value;
}

// Height straight from the definition on canonical coordinates.
Rat scratch_height_max(long n, const FibrationLineClass& c, std::int64_t u, std::int64_t v, std::int64_t s,
                       std::int64_t t) {
  const std::int64_t N = std::max(std::abs(u), std::abs(v));
  const Rat Nn = rat_pow(Rat(N), n);
  Rat m = Rat(std::abs(s));
  const Rat tt = Rat(std::abs(t)) / Nn;
  if (tt > m) m = tt;
  return rat_pow(m, c.k) * rat_pow(Rat(N), n * c.w + c.j);
}

Rat scratch_height_sq_l2(long n, const FibrationLineClass& c, std::int64_t u, std::int64_t v, std::int64_t s,
                         std::int64_t t) {
  const std::int64_t N = std::max(std::abs(u), std::abs(v));
  const Rat tn = Rat(t) / rat_pow(Rat(N), n);
  return rat_pow(Rat(s * s) + tn * tn, c.k) * rat_pow(Rat(N), 2 * (n * c.w + c.j));
}

// Box scan over (u, v, s, t) keeping canonical representatives.
std::vector<std::array<std::int64_t, 4>> brute_Fn(long n, const FibrationLineClass& c, ArchMetricKind arch,
                                                  const Rat& bound) {
  const long e = n * c.w + c.j;
  const std::int64_t R = static_cast<std::int64_t>(std::pow(to_real(bound), 1.0L / e)) + 1;
  const std::int64_t S = static_cast<std::int64_t>(std::pow(to_real(bound), 1.0L / c.k)) + 1;
  std::vector<std::array<std::int64_t, 4>> out;
  for (std::int64_t u = 0; u <= R; ++u)
    for (std::int64_t v = -R; v <= R; ++v) {
      if (std::gcd(u, v) != 1 || (u == 0 && v != 1)) continue;
      const std::int64_t N = std::max(std::abs(u), std::abs(v));
      if (rat_pow(Rat(N), e) > bound) continue;
      std::int64_t T = S;
      for (long i = 0; i < n; ++i) T *= N;
      for (std::int64_t s = 0; s <= S; ++s)
        for (std::int64_t t = -T; t <= T; ++t) {
          if (std::gcd(s, t) != 1 || (s == 0 && t != 1)) continue;
          const bool keep = arch == ArchMetricKind::MAX ? scratch_height_max(n, c, u, v, s, t) <= bound
                                                        : scratch_height_sq_l2(n, c, u, v, s, t) <= bound * bound;
          if (keep) out.push_back({u, v, s, t});
        }
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::array<std::int64_t, 4>> as_sorted(const std::vector<FnPoint>& pts) {
  std::vector<std::array<std::int64_t, 4>> out;
  for (const auto& p : pts)
    out.push_back({p.base.coords()[0].get_si(), p.base.coords()[1].get_si(), p.s, p.t});
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("Cox normalization") {
  const auto Y1 = HirzebruchSurface::make(1);
  const auto P = fp(Y1, 2, 4, 3, 8);  // (u,v) = 2 (1,2), t / 2^1 = 4
  CHECK(P.base.coords() == BigIntVector{1, 2});
  CHECK(P.s == 3);
  CHECK(P.t == 4);
  const auto Q = fp(Y1, -1, -2, 3, 4);  // l = -1 flips t for odd n
  CHECK(Q.s == 3);
  CHECK(Q.t == -4);
  const auto Y2 = HirzebruchSurface::make(2);
  CHECK(fp(Y2, -1, -2, 3, 4).t == 4);
  CHECK(fp(Y2, 3, 0, 1, 1).t == 1);  // t / 9 then cleared: (9, 1)
  CHECK(fp(Y2, 3, 0, 1, 1).s == 9);
  CHECK_THROWS_AS(fp(Y1, 0, 0, 1, 1), ValidationError);
  CHECK_THROWS_AS(fp(Y1, 1, 0, 0, 0), ValidationError);

  const auto Ym = HirzebruchSurface::make(-2);
  CHECK(Ym.n == 2);
  CHECK(fp(Ym, 1, 2, 5, 1) == fp(Y2, 1, 2, 1, 5));
}

TEST_CASE("height_Fn examples") {
  const auto Y0 = HirzebruchSurface::make(0), Y1 = HirzebruchSurface::make(1);
  CHECK(*height_Fn(Y0, {1, 0, 1}, fp(Y0, 1, 2, 1, 1), ArchMetricKind::MAX).exact == 2);
  CHECK(*height_Fn(Y1, {1, 0, 0}, fp(Y1, 1, 2, 3, 4), ArchMetricKind::MAX).exact == 3);
  CHECK(*height_Fn(Y1, {0, 1, 0}, fp(Y1, 3, 1, 5, 7), ArchMetricKind::MAX).exact == 3);
  CHECK(*height_Fn(Y1, {0, 1, 0}, fp(Y1, -3, 2, 1, 0), ArchMetricKind::L2).exact == 3);
  // L2: s^2 + t^2 / N^2 = 9 + 4 = 13.
  CHECK(height_Fn(Y1, {2, 0, 0}, fp(Y1, 1, 2, 3, 4), ArchMetricKind::L2).exact == Rat(13));
  CHECK(std::fabs(height_Fn(Y1, {1, 0, 0}, fp(Y1, 1, 2, 3, 4), ArchMetricKind::L2).value - std::sqrt(13.0L)) < 1e-18L);
}

TEST_CASE("character shift invariance") {
  const auto Y1 = HirzebruchSurface::make(1);
  const auto [a, b] = character_shift_invariance(Y1, {1, 0, 2}, fp(Y1, 1, 2, 3, 4), ArchMetricKind::MAX);
  CHECK(*a.exact == 12);
  CHECK(*b.exact == 12);

  std::mt19937_64 rng(17);
  const auto Y2 = HirzebruchSurface::make(2);
  for (int i = 0; i < 20; ++i) {
    const auto P = random_fn_point(rng, Y2, 40);
    for (auto arch : {ArchMetricKind::MAX, ArchMetricKind::L2})
      CHECK(same(height_Fn(Y2, {2, 1, 0}, P, arch), height_Fn(Y2, {2, 2, -2}, P, arch)));
  }
  std::uniform_int_distribution<long> small(-3, 3);
  for (int i = 0; i < 1000; ++i) {
    const auto Y = HirzebruchSurface::make(static_cast<long>(rng() % 4));
    const FibrationLineClass c{small(rng), small(rng), small(rng)};
    const auto P = random_fn_point(rng, Y, 25);
    const auto arch = i % 2 ? ArchMetricKind::MAX : ArchMetricKind::L2;
    const auto [h1, h2] = character_shift_invariance(Y, c, P, arch);
    CHECK(same(h1, h2));
  }
}

TEST_CASE("chart independence") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> small(-3, 3);
  for (int i = 0; i < 100; ++i) {
    const auto Y = HirzebruchSurface::make(static_cast<long>(rng() % 4));
    const FibrationLineClass c{small(rng), small(rng), small(rng)};
    const auto P = random_fn_point(rng, Y, 60, true);
    for (auto arch : {ArchMetricKind::MAX, ArchMetricKind::L2}) {
      const auto direct = height_Fn(Y, c, P, arch);
      CHECK(same(height_Fn_in_chart(Y, c, P, arch, Chart::U), direct));
      CHECK(same(height_Fn_in_chart(Y, c, P, arch, Chart::V), direct));
    }
  }
  const auto Y1 = HirzebruchSurface::make(1);
  CHECK_THROWS_AS(height_Fn_in_chart(Y1, {1, 0, 0}, fp(Y1, 1, 0, 1, 1), ArchMetricKind::MAX, Chart::V),
                  ValidationError);
}

TEST_CASE("n = 0 heights factor through both projections") {
  const auto Y0 = HirzebruchSurface::make(0);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> small(-3, 3);
  for (int i = 0; i < 200; ++i) {
    const auto P = random_fn_point(rng, Y0, 50);
    const FibrationLineClass c{small(rng), small(rng), small(rng)};
    const ProjPoint fiber = ProjPoint::from_ints({P.s, P.t});
    for (auto arch : {ArchMetricKind::MAX, ArchMetricKind::L2}) {
      // Base always carries the max gauge; the fiber uses arch.
      const ExactReal hf = height_point({1, 2, arch}, fiber);  // squared gauge, rational for both
      const Rat hb = *height_point({1, 1, ArchMetricKind::MAX}, P.base).exact;
      const ExactReal expect = l2_power(*hf.exact, c.k);
      const ExactReal got = height_Fn(Y0, c, P, arch);
      if (expect.exact) {
        CHECK(*got.exact == *expect.exact * rat_pow(hb, c.j));
      } else {
        CHECK(got.value == expect.value * to_real(rat_pow(hb, c.j)));
      }
    }
  }
}

TEST_CASE("fiber factor equals the height in the restricted lattice") {
  std::mt19937_64 rng(8);
  for (long n : {0L, 1L, 2L, 3L}) {
    const auto Y = HirzebruchSurface::make(n);
    for (int i = 0; i < 50; ++i) {
      const auto P = random_fn_point(rng, Y, 30);
      for (auto arch : {ArchMetricKind::MAX, ArchMetricKind::L2})
        CHECK(same(fiber_lattice_height(Y, P, arch), height_Fn(Y, {1, 0, 0}, P, arch)));
    }
  }
}

TEST_CASE("effectivity against a search for monomial sections") {
  // Cox monomial u^a v^b s^c t^d has class (c + d, a + b + n d) in (k, n w + j).
  auto has_monomial = [](long n, long k, long e) {
    for (long c = 0; c <= 12; ++c)
      for (long d = 0; d <= 12; ++d)
        for (long ab = 0; ab <= 60; ++ab)
          if (c + d == k && ab + n * d == e) return true;
    return false;
  };
  for (long n = 0; n <= 3; ++n) {
    const auto Y = HirzebruchSurface::make(n);
    for (long k = -3; k <= 6; ++k)
      for (long w = -3; w <= 3; ++w)
        for (long j = -6; j <= 6; ++j) CHECK(is_effective(Y, {k, w, j}) == has_monomial(n, k, n * w + j));
  }
  CHECK(is_effective(HirzebruchSurface::make(2), {0, 0, 0}));
  for (long n = 0; n <= 3; ++n) CHECK(!is_effective(HirzebruchSurface::make(n), {-1, 0, 5}));
  const auto Y1 = HirzebruchSurface::make(1);
  CHECK(is_effective(Y1, {1, 0, 0}));
  CHECK(!is_effective(Y1, {1, 0, -1}));

  // Those monomials are sections: |u^a v^b s^c t^d| <= H on canonical coordinates, with equality somewhere.
  std::mt19937_64 rng(3);
  for (long n = 0; n <= 3; ++n) {
    const auto Y = HirzebruchSurface::make(n);
    for (long a = 0; a <= 2; ++a)
      for (long c = 0; c <= 2; ++c)
        for (long d = 0; d <= 2; ++d) {
          const FibrationLineClass cls{c + d, 0, a + n * d};
          for (int i = 0; i < 20; ++i) {
            const auto P = random_fn_point(rng, Y, 20);
            const Rat value = rat_pow(Rat(abs(P.base.coords()[0])), a) * rat_pow(Rat(std::abs(P.s)), c) *
                              rat_pow(Rat(std::abs(P.t)), d);
            CHECK(value <= *height_Fn(Y, cls, P, ArchMetricKind::MAX).exact);
          }
          CHECK(*height_Fn(Y, cls, fp(Y, 1, 0, 1, 1), ArchMetricKind::MAX).exact == 1);
        }
  }
}

TEST_CASE("anticanonical class") {
  const auto Y0 = HirzebruchSurface::make(0);
  const auto K0 = anticanonical_class(Y0);
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const auto P = random_fn_point(rng, Y0, 40);
    const Rat hb = *height_point({1, 1, ArchMetricKind::MAX}, P.base).exact;
    const Rat hf = *height_point({1, 1, ArchMetricKind::MAX}, ProjPoint::from_ints({P.s, P.t})).exact;
    CHECK(*height_Fn(Y0, K0, P, ArchMetricKind::MAX).exact == hb * hb * hf * hf);
  }
  for (long n = 0; n <= 3; ++n) {
    const auto Y = HirzebruchSurface::make(n);
    const auto K = anticanonical_class(Y);
    CHECK(is_effective(Y, K));
    // -K . E = 2 - n: on E the height is N^(2 - n).
    const auto P = fp(Y, 1, 5, 0, 1);
    CHECK(*height_Fn(Y, K, P, ArchMetricKind::MAX).exact == rat_pow(Rat(5), 2 - n));
    for (long shift = -2; shift <= 2; ++shift) {
      const FibrationLineClass shifted{K.k, K.w + shift, K.j - n * shift};
      CHECK(same(height_Fn(Y, shifted, fp(Y, 2, 7, 3, -11), ArchMetricKind::L2),
                 height_Fn(Y, K, fp(Y, 2, 7, 3, -11), ArchMetricKind::L2)));
    }
  }

  // On F_1 minus E the anticanonical count grows like H log H: a = 1 with b pinned to 2.
  const auto Y1 = HirzebruchSurface::make(1);
  const Real top = 20000;
  const auto pts = enumerate_Fn(Y1, anticanonical_class(Y1), ArchMetricKind::MAX, Rat(20000), {true});
  std::vector<Real> heights;
  for (const auto& p : pts) heights.push_back(height_Fn(Y1, anticanonical_class(Y1), p, ArchMetricKind::MAX).value);
  std::sort(heights.begin(), heights.end());
  CountTable table;
  for (Real h = 100; h <= top * 1.0001L; h *= std::pow(10.0L, 0.25L)) {
    table.thresholds.push_back(h);
    table.counts.push_back(std::upper_bound(heights.begin(), heights.end(), h) - heights.begin());
  }
  FitOptions opt;
  opt.pin_b = 2;
  const auto fit = fit_asymptotics(table, opt);
  CHECK(std::fabs(fit.a - 1) < 0.1L);
}

TEST_CASE("enumerate_Fn examples") {
  const auto Y0 = HirzebruchSurface::make(0), Y1 = HirzebruchSurface::make(1);
  CHECK(enumerate_Fn(Y0, {1, 0, 1}, ArchMetricKind::MAX, Rat(2)).size() == 48);
  CHECK(brute_Fn(0, {1, 0, 1}, ArchMetricKind::MAX, Rat(2)).size() == 48);
  CHECK(enumerate_Fn(Y1, {1, 0, 1}, ArchMetricKind::MAX, Rat(1)).size() == 16);
  CHECK(enumerate_Fn(Y1, {1, 0, 1}, ArchMetricKind::MAX, Rat(1, 2)).empty());
  CHECK(enumerate_Fn(Y1, {1, 0, 1}, ArchMetricKind::MAX, Rat(1), {true}).size() == 12);
  CHECK_THROWS_AS(enumerate_Fn(Y1, {0, 0, 1}, ArchMetricKind::MAX, Rat(5)), ValidationError);
  CHECK_THROWS_AS(enumerate_Fn(Y1, {1, 0, 1}, ArchMetricKind::MAX, Rat(1000), {false, 10}), CapacityError);
}

TEST_CASE("enumerate_Fn equals a brute-force scan") {
  for (long n : {0L, 1L, 2L}) {
    const auto Y = HirzebruchSurface::make(n);
    for (auto arch : {ArchMetricKind::MAX, ArchMetricKind::L2}) {
      const auto K = anticanonical_class(Y);
      for (Rat bound : {Rat(1), Rat(7, 2), Rat(50), Rat(200)}) {
        const auto pts = enumerate_Fn(Y, K, arch, bound);
        CHECK(as_sorted(pts) == brute_Fn(n, K, arch, bound));
        for (const auto& p : pts) {
          const auto h = height_Fn(Y, K, p, arch);
          CHECK(h.exact);
          CHECK(*h.exact <= bound);
        }
      }
      for (FibrationLineClass c : {FibrationLineClass{1, 0, 1}, FibrationLineClass{2, 0, 1}, FibrationLineClass{1, 1, 1}})
        if (c.base_exponent(n) >= 1)
          CHECK(as_sorted(enumerate_Fn(Y, c, arch, Rat(8))) == brute_Fn(n, c, arch, Rat(8)));
    }
  }
}
