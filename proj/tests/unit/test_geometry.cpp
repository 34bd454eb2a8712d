#include "oscistrip/errors.hpp"
#include "oscistrip/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace oscistrip;
using std::numbers::pi;

TEST_CASE("g_eps evaluates the fast-variable profile") {
  const StripRegion r(BoundaryCurve::circle(), OscillationProfile::two_plus_cos(), 0.1);
  CHECK(g_eps(r, 0.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(g_eps(r, 0.1 * pi) == doctest::Approx(1.0).epsilon(1e-12));
  const StripRegion c(BoundaryCurve::circle(), OscillationProfile::constant(1.7), 0.05);
  for (double s : {0.0, 0.3, 2.0, 6.0})
    CHECK(g_eps(c, s) == 1.7);
  CHECK_THROWS_AS(g_eps(r, -0.5), DomainError);
  CHECK_THROWS_AS(g_eps(r, 7.0), DomainError);
}

TEST_CASE("strip map on the unit circle") {
  const StripRegion r(BoundaryCurve::circle(), OscillationProfile::two_plus_cos(), 0.1);
  auto p = strip_map(r, 0.0, 0.05);
  CHECK(p.point.x() == doctest::Approx(0.95).epsilon(1e-14));
  CHECK(std::abs(p.point.y()) < 1e-14);
  CHECK(p.jacobian == doctest::Approx(0.95).epsilon(1e-14));
  // At s = pi/2 the depth eps g is exactly 0.1 and the strip is half-open.
  p = strip_map(r, pi / 2, 0.09);
  CHECK(std::abs(p.point.x()) < 1e-14);
  CHECK(p.point.y() == doctest::Approx(0.91).epsilon(1e-14));
  CHECK(p.jacobian == doctest::Approx(0.91).epsilon(1e-14));
  CHECK_THROWS_AS(strip_map(r, pi / 2, 0.1), DomainError);
  for (double s : {0.0, 1.0, 4.0}) {
    const auto q = strip_map(r, s, 0.0);
    CHECK((q.point - r.curve().point(s)).norm() < 1e-15);
    CHECK(q.jacobian == 1.0);
  }
  CHECK_THROWS_AS(strip_map(r, 0.0, 0.31), DomainError);
  CHECK_THROWS_AS(strip_map(r, 0.0, -0.01), DomainError);
}

TEST_CASE("strip membership inverts the strip map") {
  const StripRegion one(BoundaryCurve::circle(), OscillationProfile::constant(1.0), 0.1);
  auto m = strip_membership(one, Vec2(0.95, 0.0));
  REQUIRE(m);
  CHECK(std::abs(m->s) < 1e-12);
  CHECK(m->t == doctest::Approx(0.05).epsilon(1e-12));
  CHECK_FALSE(strip_membership(one, Vec2(0.5, 0.0)));
  const StripRegion osc(BoundaryCurve::circle(), OscillationProfile::two_plus_cos(), 0.1);
  m = strip_membership(osc, Vec2(0.75, 0.0));
  REQUIRE(m);
  CHECK(m->t == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("mu closed forms") {
  for (double s : {0.0, 0.7, 3.1, 5.9}) {
    CHECK(std::abs(mu(OscillationProfile::two_plus_cos(), s) - 2.0) < 1e-10);
    CHECK(std::abs(mu(OscillationProfile::constant(1.3), s) - 1.3) < 1e-10);
    CHECK(std::abs(mu(OscillationProfile::modulated(2.0, 1.0, 1.0 / 2), s) - (2.0 + std::sin(s))) <
          1e-10);
  }
}

TEST_CASE("eps0 guards the strip construction") {
  const auto curve = BoundaryCurve::circle();
  const auto prof = OscillationProfile::two_plus_cos();
  const double e0 = StripRegion::compute_eps0(curve, prof);
  CHECK(e0 == doctest::Approx(0.3).epsilon(1e-6)); // 0.9 / (3 * 1)
  CHECK_NOTHROW(StripRegion(curve, prof, e0));
  CHECK_THROWS_AS(StripRegion(curve, prof, 1.01 * e0), ConfigError);
  CHECK_THROWS_AS(StripRegion(curve, prof, 0.0), ConfigError);
}

TEST_CASE("property: strip map is a bijection onto the strip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto &curve : {BoundaryCurve::circle(), BoundaryCurve::ellipse(1.2, 0.8)}) {
    for (double eps : {0.2, 0.05}) {
      const auto prof = OscillationProfile::two_plus_cos();
      if (eps > StripRegion::compute_eps0(curve, prof))
        continue;
      const StripRegion r(curve, prof, eps);
      const double g1 = prof.g1;
      double kmax = 0.0;
      for (int i = 0; i < 400; ++i)
        kmax = std::max(kmax, std::abs(curve.curvature_factor(curve.period() * i / 400.0)));
      for (int k = 0; k < 300; ++k) {
        const double s = curve.period() * u(rng);
        const double t = 0.999 * eps * g_eps(r, s) * u(rng);
        const auto p = strip_map(r, s, t);
        CHECK(p.jacobian <= 1.0 + 1e-15);
        CHECK(p.jacobian > 1.0 - eps * g1 * kmax - 1e-12);
        const auto back = strip_membership(r, p.point);
        REQUIRE(back);
        const double ds = std::remainder(back->s - s, curve.period());
        CHECK(std::abs(ds) < 1e-9);
        CHECK(std::abs(back->t - t) < 1e-9);
      }
    }
  }
}

TEST_CASE("property: every membership hit lies in the non-oscillating strip") {
  const auto prof = OscillationProfile::two_plus_cos();
  const StripRegion r(BoundaryCurve::circle(), prof, 0.1);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int hits = 0;
  for (int k = 0; k < 20000; ++k) {
    const Vec2 p(u(rng), u(rng));
    if (p.norm() > 1.0)
      continue;
    if (auto m = strip_membership(r, p)) {
      ++hits;
      CHECK(m->t < 0.1 * prof.g1);
      CHECK(m->t == doctest::Approx(1.0 - p.norm()).epsilon(1e-10));
    } else {
      const double th = std::atan2(p.y(), p.x());
      const double s = th < 0 ? th + 2 * pi : th;
      CHECK(1.0 - p.norm() >= 0.1 * prof.g(s, s / 0.1) - 1e-12);
    }
  }
  CHECK(hits > 0);
}

TEST_CASE("ellipse is unit speed with the right perimeter") {
  const auto e = BoundaryCurve::ellipse(2.0, 1.0);
  CHECK(e.period() == doctest::Approx(9.688448220547675).epsilon(1e-9));
  for (double s : {0.0, 1.0, 2.5, 7.0})
    CHECK(e.tangent(s).norm() == doctest::Approx(1.0).epsilon(1e-9));
}
