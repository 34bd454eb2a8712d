#include "../oracles.hpp"
#include "oscistrip/nonlinearity.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using oscistrip::Nonlinearity;

TEST_CASE("bistable core values") {
  const Nonlinearity f = Nonlinearity::bistable();
  CHECK(f.value(0.0) == 0.0);
  CHECK(f.value(1.0) == doctest::Approx(0.0));
  CHECK(f.value(-1.0) == doctest::Approx(0.0));
  CHECK(f.value(0.5) == doctest::Approx(0.375));
  CHECK(f.value(2.0) == doctest::Approx(-6.0));
  CHECK(f.derivative(0.0) == doctest::Approx(1.0));
  CHECK(f.derivative(1.0) == doctest::Approx(-2.0));
  CHECK(f.second_derivative(0.5) == doctest::Approx(-3.0));
  CHECK(f.primitive(1.0) == doctest::Approx(0.25));
  // Saturated at the cubic value at 3.
  CHECK(f.value(3.0) == doctest::Approx(-24.0));
  CHECK(f.value(5.0) == doctest::Approx(-24.0));
  CHECK(f.value(-7.0) == doctest::Approx(24.0));
  CHECK(f.derivative(4.0) == doctest::Approx(0.0));

  const Nonlinearity g = Nonlinearity::bistable(2.0, 0.5);
  CHECK(g.value(1.0) == doctest::Approx(1.5));
  CHECK(g.derivative(1.0) == doctest::Approx(0.5));
}

TEST_CASE("simple kinds") {
  CHECK(Nonlinearity::zero().value(1.3) == 0.0);
  CHECK(Nonlinearity::zero().bound() == 0.0);
  CHECK(Nonlinearity::constant(0.7).value(-4.0) == doctest::Approx(0.7));
  CHECK(Nonlinearity::constant(0.7).derivative(1.0) == 0.0);
  CHECK(Nonlinearity::constant(0.7).primitive(2.0) == doctest::Approx(1.4));
  CHECK(Nonlinearity::linear(1.5).value(1.0) == doctest::Approx(1.5));
  CHECK(Nonlinearity::linear(1.5).value(10.0) == doctest::Approx(4.5));
}

TEST_CASE("dissipation thresholds") {
  CHECK(Nonlinearity::bistable().dissipation_threshold() == doctest::Approx(1.0).epsilon(0.02));
  CHECK(Nonlinearity::bistable(4.0, 1.0).dissipation_threshold() ==
        doctest::Approx(2.0).epsilon(0.02));
  CHECK(std::isinf(Nonlinearity::constant(1.0).dissipation_threshold()));
  CHECK(std::isinf(Nonlinearity::zero().dissipation_threshold()));
  CHECK(std::isinf(Nonlinearity::linear(1.0).dissipation_threshold()));
}

TEST_CASE("property: odd, C2 across the blend, derivatives consistent") {
  for (const auto &f : {Nonlinearity::bistable(), Nonlinearity::bistable(2.0, 0.5),
                        Nonlinearity::linear(-1.0)}) {
    for (double u : {0.3, 1.7, 2.0, 2.4, 3.0, 3.8})
      CHECK(f.value(-u) == doctest::Approx(-f.value(u)));
    for (double knot : {2.0, 3.0}) {
      const double d = 1e-9;
      CHECK(f.value(knot - d) == doctest::Approx(f.value(knot + d)).epsilon(1e-7));
      CHECK(f.derivative(knot - d) == doctest::Approx(f.derivative(knot + d)).epsilon(1e-6));
      CHECK(f.second_derivative(knot - d) ==
            doctest::Approx(f.second_derivative(knot + d)).epsilon(1e-6).scale(1.0));
    }
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-4.0, 4.0);
    for (int i = 0; i < 50; ++i) {
      const double u = U(rng), h = 1e-5;
      CHECK(f.derivative(u) ==
            doctest::Approx((f.value(u + h) - f.value(u - h)) / (2 * h)).epsilon(1e-6).scale(1.0));
      CHECK(f.second_derivative(u) ==
            doctest::Approx((f.derivative(u + h) - f.derivative(u - h)) / (2 * h)).epsilon(1e-5).scale(1.0));
      const double prim = oracle::integrate([&](double t) { return f.value(t); }, 0.0, u, 16);
      CHECK(f.primitive(u) == doctest::Approx(prim).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("property: bound dominates f, f', f'' everywhere sampled") {
  for (const auto &f : {Nonlinearity::bistable(), Nonlinearity::bistable(2.0, 0.5),
                        Nonlinearity::constant(-2.0), Nonlinearity::linear(3.0)}) {
    const double K = f.bound();
    CHECK(std::isfinite(K));
    double seen = 0.0;
    for (double u = -20.0; u <= 20.0; u += 1e-3)
      seen = std::max({seen, std::abs(f.value(u)), std::abs(f.derivative(u)),
                       std::abs(f.second_derivative(u))});
    CHECK(seen <= K * (1.0 + 1e-6));
    CHECK(seen >= K * (1.0 - 1e-3));
  }
}
