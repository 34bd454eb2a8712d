#include "../oracles.hpp"
#include "fixtures.hpp"
#include "oscistrip/errors.hpp"
#include "oscistrip/semiflow.hpp"

#include <doctest.h>

#include <cmath>

using namespace oscistrip;

namespace {
Vector smooth(const FemSystem &s) {
  return s.interpolate(ScalarField::from(
      [](const Vec2 &p) { return 1.0 + p.x() - 0.5 * p.y() * p.y() + 0.3 * std::sin(3 * p.y()); }));
}
} // namespace

TEST_CASE("constant state under the plain linear flow") {
  // S 1 = lambda M 1, so one step maps c to c / (1 + dt lambda).
  const FemSystem s = fixtures::limit(0.0, Nonlinearity::zero(), 1.0);
  const Vector c = Vector::Constant(static_cast<Eigen::Index>(s.size()), 2.0);
  const Vector next = step_imex(s, c, 0.1);
  CHECK((next.array() - 2.0 / 1.1).abs().maxCoeff() < 1e-10);
  const Trajectory t = evolve(s, c, 1.0, 0.1);
  CHECK(t.states.size() == 11);
  CHECK(t.times.back() == doctest::Approx(1.0));
  CHECK((t.states.back().array() - 2.0 * std::pow(1.1, -10)).abs().maxCoeff() < 1e-10);
}

TEST_CASE("step and evolve argument checks") {
  const FemSystem s = fixtures::limit(0.0, Nonlinearity::zero(), 1.0);
  const Vector u = smooth(s);
  CHECK_THROWS_AS(step_imex(s, u, 0.0), DomainError);
  CHECK_THROWS_AS(step_imex(s, u, -0.1), DomainError);
  CHECK_THROWS_AS(evolve(s, u, 1.0, 0.3), DomainError);
  CHECK(step_count(1.0, 0.1) == 10);
  CHECK(step_count(2.0, 0.001) == 2000);
  CHECK_THROWS_AS(step_count(1.0, 0.15), DomainError);
  const Trajectory strided = evolve(s, u, 1.0, 0.1, 3);
  CHECK(strided.times.size() == 5); // 0, 0.3, 0.6, 0.9, 1.0
  CHECK(strided.times.back() == doctest::Approx(1.0));
}

TEST_CASE("equilibria are fixed points of the step map") {
  const FemSystem &s = fixtures::scenario(0.1);
  const Vector zero = Vector::Zero(static_cast<Eigen::Index>(s.size()));
  CHECK(step_imex(s, zero, 0.01).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("property: semigroup law holds exactly on the step grid") {
  for (double eps : {0.0, 0.1}) {
    const FemSystem &s = fixtures::scenario(eps);
    const ImexStepper stepper(s, 0.01);
    const Vector u = smooth(s);
    const Vector direct = evolve(stepper, u, 0.5).states.back();
    const Vector split = evolve(stepper, evolve(stepper, u, 0.2).states.back(), 0.3).states.back();
    CHECK((direct - split).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("property: backward Euler contracts at least like the lowest mode") {
  const FemSystem s = fixtures::strip(0.1, 1.0, Nonlinearity::zero(), 1.0);
  const double nu1 = lowest_pencil_eigenvalue(s.system(), s.mass());
  const double dt = 0.05;
  Vector u = smooth(s);
  const ImexStepper stepper(s, dt);
  for (int n = 0; n < 20; ++n) {
    const Vector next = stepper.step(u);
    CHECK(std::sqrt(next.dot(s.mass() * next)) <=
          std::sqrt(u.dot(s.mass() * u)) / (1.0 + dt * nu1) * (1 + 1e-10));
    u = next;
  }
}

TEST_CASE("first-order convergence in dt") {
  const FemSystem &s = fixtures::scenario(0.1);
  const Vector u0 = smooth(s);
  const Vector ref = evolve(s, u0, 0.5, 1.0 / 6400).states.back();
  std::vector<double> dts{0.05, 0.025, 0.0125}, err;
  for (double dt : dts)
    err.push_back(s.h1(evolve(s, u0, 0.5, dt).states.back() - ref));
  CHECK(oracle::loglog_fit(dts, err) == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("semigroup gaps") {
  const FemSystem &z = fixtures::scenario(0.0);
  const Vector u = smooth(z);
  const FemSystem lin = z.with_nonlinearity(Nonlinearity::zero());
  const GapSeries self = linear_semigroup_gap(lin, lin, u, 0.5, 0.01, 0.5, 0.3);
  CHECK(self.sup == 0.0);
  CHECK(self.t.size() == self.gap.size());
  const GapSeries nself = nonlinear_semigroup_gap(z, z, u, u, 0.5, 0.01);
  CHECK(nself.sup == 0.0);

  const FemSystem lin_e = fixtures::scenario(0.1).with_nonlinearity(Nonlinearity::zero());
  const GapSeries g = linear_semigroup_gap(lin_e, lin, u, 0.5, 0.01, 0.5, 0.3);
  double sup = 0.0;
  for (std::size_t i = 0; i < g.t.size(); ++i) {
    CHECK(g.weighted[i] ==
          doctest::Approx(std::pow(g.t[i], 0.5) * std::exp(0.3 * g.t[i]) * g.gap[i]));
    sup = std::max(sup, g.weighted[i]);
  }
  CHECK(g.sup == doctest::Approx(sup));
  CHECK(g.sup > 0.0);
}

TEST_CASE("norm series, energy and absorption") {
  const FemSystem &s = fixtures::scenario(0.1);
  const Vector u0 = 3.0 * smooth(s);
  const Trajectory t = evolve(s, u0, 5.0, 0.01, 10);
  const auto rows = norm_series(s, t);
  CHECK(rows.size() == t.states.size());
  CHECK(rows.front().h1 == doctest::Approx(s.h1(u0)));
  CHECK(rows.front().energy == doctest::Approx(s.energy(u0)));
  // Gradient structure: energy is non-increasing along the flow.
  CHECK(max_energy_increase(rows) <= 1e-10);
  const double r = absorption_time(rows, 1.0);
  CHECK(std::isfinite(r));
  CHECK(std::isnan(absorption_time(rows, 1e-6)));
  CHECK(max_energy_increase({{0, 0, 0, 1.0}, {1, 0, 0, 1.5}, {2, 0, 0, 1.2}}) == doctest::Approx(0.5));
}
