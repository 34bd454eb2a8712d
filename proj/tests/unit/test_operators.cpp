#include "../oracles.hpp"
#include "fixtures.hpp"
#include "oscistrip/operators.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace oscistrip;

TEST_CASE("log-log slope") {
  CHECK(loglog_slope({1, 2, 4, 8}, {3, 12, 48, 192}) == doctest::Approx(2.0));
  CHECK(loglog_slope({1, 2, 4}, {1, 0.0, 0.25}) == doctest::Approx(-1.0));
  std::vector<double> x{0.1, 0.2, 0.4, 0.8}, y{0.7, 1.9, 2.2, 6.5};
  CHECK(loglog_slope(x, y) == doctest::Approx(oracle::loglog_fit(x, y)));
}

TEST_CASE("potential gap vanishes against itself and is symmetric in sign") {
  const FemSystem a = fixtures::strip(0.1, 1.0, Nonlinearity::zero(), 1.0);
  CHECK(potential_operator_gap(a, a) == 0.0);
  const FemSystem b = fixtures::strip(0.2, 1.0, Nonlinearity::zero(), 1.0);
  CHECK(potential_operator_gap(a, b) == doctest::Approx(potential_operator_gap(b, a)).epsilon(1e-6));
}

TEST_CASE("potential gap against a dense oracle") {
  const FemSystem e = fixtures::strip(0.2, 0.5, Nonlinearity::zero(), 1.0);
  const FemSystem z = fixtures::limit(0.5, Nonlinearity::zero(), 1.0);
  const Matrix diff = Matrix(e.potential()) - Matrix(z.potential());
  const Vector ev = oracle::dense_pencil(diff, Matrix(e.norm_matrix()));
  const double ref = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
  CHECK(potential_operator_gap(e, z) == doctest::Approx(ref).epsilon(1e-6));

  auto V = [](double s) { return 0.5 + 0.25 * std::cos(s); };
  const double via_region = potential_operator_gap(
      z, fixtures::region(0.2), [&](const Vec2 &, double s) { return V(s); },
      [&](double s) { return 2.0 * V(s); }, fixtures::fem_spec());
  const FemSystem ev2 = FemSystem::strip(fixtures::coarse_mesh(), fixtures::region(0.2),
                                         [&](const Vec2 &, double s) { return V(s); },
                                         Nonlinearity::zero(), 1.0, fixtures::fem_spec());
  const FemSystem zv2 = FemSystem::limit(fixtures::coarse_mesh(), OscillationProfile::two_plus_cos(),
                                         [&](double s) { return 2.0 * V(s); }, Nonlinearity::zero(), 1.0);
  CHECK(via_region == doctest::Approx(potential_operator_gap(ev2, zv2)).epsilon(1e-6));
}

TEST_CASE("property: potential gap decreases along the ladder") {
  const FemSystem z = fixtures::limit(1.0, Nonlinearity::zero(), 1.0);
  const double g2 = potential_operator_gap(fixtures::strip(0.2, 1.0, Nonlinearity::zero(), 1.0), z);
  const double g1 = potential_operator_gap(fixtures::strip(0.1, 1.0, Nonlinearity::zero(), 1.0), z);
  CHECK(g1 < g2);
}

TEST_CASE("operator gap estimate") {
  const FemSystem z = fixtures::limit(1.0, Nonlinearity::zero(), 1.0);
  std::vector<Vector> fields;
  for (const auto &f : smooth_test_fields(20))
    fields.push_back(z.interpolate(f));
  CHECK(fields.size() == 20);
  CHECK(operator_gap_estimate(z, z, fields) == 0.0);
  const FemSystem e = fixtures::strip(0.1, 1.0, Nonlinearity::zero(), 1.0);
  const double est = operator_gap_estimate(e, z, fields);
  // Brute force over the same fields.
  double ref = 0.0;
  for (const auto &u : fields)
    ref = std::max(ref, z.dual((e.system() - z.system()) * u) / z.dual(z.system() * u));
  CHECK(est == doctest::Approx(ref).epsilon(1e-10));
  CHECK(est <= potential_operator_gap(e, z) * (1.0 + 1e-6) /
                   lowest_pencil_eigenvalue(z.system(), z.norm_matrix()));
}

TEST_CASE("reaction measure and trace constant") {
  const FemSystem z = fixtures::limit(0.0, Nonlinearity::bistable(), 1.0);
  CHECK(reaction_measure(z) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-10));
  const FemSystem e = fixtures::strip(0.1, 0.0, Nonlinearity::bistable(), 1.0);
  const double ci = conc_integral(fixtures::region(0.1), ScalarField::constant(1.0),
                                  ScalarField::constant(1.0), fixtures::fem_spec());
  CHECK(reaction_measure(e) == doctest::Approx(ci).epsilon(1e-10));

  // R equals the unit-potential matrix, so the trace constant is a dense pencil maximum.
  const FemSystem p = fixtures::strip(0.1, 1.0, Nonlinearity::zero(), 1.0);
  const double ref = oracle::dense_pencil(Matrix(p.potential()), Matrix(p.norm_matrix())).maxCoeff();
  CHECK(reaction_trace_constant(e) == doctest::Approx(ref).epsilon(1e-6));

  const ReactionBounds b = reaction_bounds(e);
  const double K = Nonlinearity::bistable().bound();
  CHECK(b.trace_constant == doctest::Approx(ref).epsilon(1e-6));
  CHECK(b.bound_k == doctest::Approx(K * std::sqrt(b.measure * b.trace_constant)));
  CHECK(b.lipschitz_l == doctest::Approx(K * b.trace_constant));
}

TEST_CASE("property: reaction bounds hold on random states") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (double eps : {0.0, 0.1}) {
    const FemSystem s = fixtures::system(eps, 0.0, Nonlinearity::bistable(), 1.0);
    const ReactionBounds b = reaction_bounds(s);
    const auto n = static_cast<Eigen::Index>(s.size());
    for (int trial = 0; trial < 10; ++trial) {
      Vector u(n), v(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        u[i] = U(rng);
        v[i] = U(rng);
      }
      CHECK(s.dual(s.apply_F(u)) <= b.bound_k * (1 + 1e-9));
      CHECK(s.dual(s.apply_F(u) - s.apply_F(v)) <= b.lipschitz_l * s.h1(u - v) * (1 + 1e-9));
    }
  }
}

TEST_CASE("Frechet check on the linear kind is exact") {
  const FemSystem s = fixtures::strip(0.1, 0.0, Nonlinearity::linear(1.0), 1.0);
  const Vector u = s.interpolate(ScalarField::from([](const Vec2 &p) { return 0.5 * p.x(); }));
  const Vector w = s.interpolate(ScalarField::from([](const Vec2 &p) { return p.y(); }));
  const FrechetCheck c = frechet_check(s, u, w, {1e-1, 1e-2, 1e-3});
  for (double e : c.error)
    CHECK(e < 1e-10);
  const FemSystem b = fixtures::strip(0.1, 0.0, Nonlinearity::bistable(), 1.0);
  const FrechetCheck d = frechet_check(b, u, w, {1e-1, 5e-2, 2.5e-2, 1.25e-2});
  CHECK(d.order == doctest::Approx(1.0).epsilon(0.1));
  CHECK(d.h.size() == 4);
}
