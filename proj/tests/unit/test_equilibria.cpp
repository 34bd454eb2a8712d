#include "../oracles.hpp"
#include "fixtures.hpp"
#include "oscistrip/equilibria.hpp"
#include "oscistrip/errors.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>

using namespace oscistrip;

TEST_CASE("Hungarian assignment against brute force") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 10.0);
  for (int n : {1, 2, 3, 5, 6}) {
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (auto &row : cost)
      for (auto &c : row)
        c = U(rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
      double t = 0;
      for (int i = 0; i < n; ++i)
        t += cost[i][perm[i]];
      best = std::min(best, t);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const auto a = hungarian(cost);
    double got = 0;
    for (int i = 0; i < n; ++i)
      got += cost[i][a[i]];
    CHECK(got == doctest::Approx(best));
    std::vector<int> sorted = a;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i)
      CHECK(sorted[i] == i);
  }
}

TEST_CASE("Newton on a linear problem matches a direct solve") {
  const FemSystem s = fixtures::limit(0.0, Nonlinearity::constant(0.7), 1.0);
  const auto n = static_cast<Eigen::Index>(s.size());
  const EquilibriumPoint p = newton_equilibrium(s, Vector::Zero(n));
  const Vector rhs = s.apply_F(Vector::Zero(n));
  const Vector direct = Eigen::MatrixXd(s.system()).ldlt().solve(rhs);
  CHECK((p.state - direct).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(p.iterations <= 2);
  CHECK(p.residual < 1e-10);
  CHECK(p.morse_index == 0);
  CHECK(p.hyperbolic);
  CHECK(p.h1_norm == doctest::Approx(s.h1(p.state)));
}

TEST_CASE("linearization spectrum against a dense oracle") {
  const FemSystem &s = fixtures::scenario(0.2);
  const Vector u = s.interpolate(ScalarField::from([](const Vec2 &p) { return 0.8 * p.x(); }));
  const Vector got = linearization_spectrum(s, u, 3);
  const Vector ref = oracle::dense_pencil(Eigen::MatrixXd(s.system() - s.apply_Fprime(u)),
                                          Eigen::MatrixXd(s.norm_matrix()));
  for (int i = 0; i < 3; ++i)
    CHECK(got[i] == doctest::Approx(ref[i]).epsilon(1e-7).scale(1.0));
}

TEST_CASE("is_hyperbolic") {
  EquilibriumPoint p;
  CHECK_THROWS_AS(is_hyperbolic(p, 1e-3), DomainError);
  p.spectrum = Vector(3);
  p.spectrum << -0.5, 2e-3, 1.0;
  CHECK(is_hyperbolic(p, 1e-3));
  p.spectrum[1] = -5e-4;
  CHECK_FALSE(is_hyperbolic(p, 1e-3));
}

TEST_CASE("scenario equilibria: three points, odd symmetry, Morse indices 0 1 0") {
  for (double eps : {0.0, 0.1}) {
    const FemSystem &s = fixtures::scenario(eps);
    std::vector<std::string> log;
    const auto eq = find_all_equilibria(s, {}, {}, &log);
    REQUIRE(eq.size() == 3);
    CHECK(eq[0].morse_index == 0);
    CHECK(eq[1].morse_index == 1);
    CHECK(eq[2].morse_index == 0);
    CHECK(eq[1].h1_norm < 1e-10);
    // f is odd, so -u is an equilibrium whenever u is.
    CHECK(s.h1(eq[0].state + eq[2].state) < 1e-8);
    for (const auto &p : eq) {
      CHECK(p.residual < 1e-9);
      CHECK(p.hyperbolic);
      CHECK(p.epsilon == eps);
      CHECK(p.spectrum.size() == 3);
      CHECK(std::is_sorted(p.spectrum.data(), p.spectrum.data() + p.spectrum.size()));
      // Inertia and spectrum agree.
      CHECK(p.morse_index == (p.spectrum.array() < 0).count());
    }
  }
}

TEST_CASE("matching and branch continuation") {
  const FemSystem &z = fixtures::scenario(0.0);
  const auto e0 = find_all_equilibria(z);
  const auto e1 = find_all_equilibria(fixtures::scenario(0.1));
  std::vector<EquilibriumPoint> shuffled{e1[2], e1[0], e1[1]};
  const Matching m = match_equilibria(z, shuffled, e0);
  CHECK(m.partner == std::vector<int>{2, 0, 1});
  CHECK(m.total == doctest::Approx(m.distance[0] + m.distance[1] + m.distance[2]));
  CHECK_THROWS_AS(match_equilibria(z, {e1[0]}, e0), CountMismatch);

  auto sys = [](double eps) -> const FemSystem & { return fixtures::scenario(eps); };
  const EquilibriumBranch b = continue_branch(sys, {0.2, 0.1}, e0[2], 0.5);
  REQUIRE(b.points.size() == 2);
  CHECK(b.distance[1] < b.distance[0]);
  CHECK(b.distance[1] == doctest::Approx(z.h1(e1[2].state - e0[2].state)).epsilon(1e-6));
  CHECK_THROWS_AS(continue_branch(sys, {0.2, 0.1}, e0[2], 1e-6), BranchEscape);
}

TEST_CASE("Newton failure is reported") {
  const FemSystem &s = fixtures::scenario(0.1);
  NewtonOptions o;
  o.max_iterations = 1;
  o.tol = 1e-14;
  const Vector guess = Vector::Constant(static_cast<Eigen::Index>(s.size()), 2.5);
  CHECK_THROWS_AS(newton_equilibrium(s, guess, o), NumericalError);
}
