#include "../oracles.hpp"
#include "fixtures.hpp"
#include "oscistrip/attractors.hpp"
#include "oscistrip/equilibria.hpp"
#include "oscistrip/errors.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <random>

using namespace oscistrip;

namespace {

Vector random_state(std::mt19937_64 &rng, Eigen::Index n, double scale) {
  std::uniform_real_distribution<double> U(-scale, scale);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = U(rng);
  return v;
}

double brute_semidist(const FemSystem &s, const AttractorSample &a, const AttractorSample &b) {
  double sup = 0.0;
  for (const auto &x : a.states) {
    double inf = 1e300;
    for (const auto &y : b.states)
      inf = std::min(inf, s.h1(x - y));
    sup = std::max(sup, inf);
  }
  return sup;
}

} // namespace

TEST_CASE("sample bookkeeping") {
  AttractorSample a, b;
  const Vector v = Vector::Ones(4);
  CHECK(a.add(v, AttractorSample::Source::trajectory_tail, 0.0) == 0);
  CHECK(a.add(2 * v, AttractorSample::Source::trajectory_tail, 0.1) == 1);
  a.link(0, 1);
  b.add(v, AttractorSample::Source::equilibrium, 0.0);
  b.add(3 * v, AttractorSample::Source::unstable_manifold, 0.0);
  b.link(0, 1);
  a.append(b);
  CHECK(a.size() == 4);
  REQUIRE(a.links.size() == 2);
  CHECK(a.links[1] == std::array<int, 2>{2, 3});
  CHECK(a.source[3] == AttractorSample::Source::unstable_manifold);
  CHECK(to_string(AttractorSample::Source::equilibrium) != to_string(AttractorSample::Source::trajectory_tail));
}

TEST_CASE("semidistance against brute force") {
  const FemSystem &s = fixtures::scenario(0.0);
  const auto n = static_cast<Eigen::Index>(s.size());
  std::mt19937_64 rng(8);
  AttractorSample a, b;
  for (int i = 0; i < 7; ++i)
    a.add(random_state(rng, n, 1.0), AttractorSample::Source::trajectory_tail, i);
  for (int i = 0; i < 5; ++i)
    b.add(random_state(rng, n, 1.0), AttractorSample::Source::trajectory_tail, i);
  CHECK(hausdorff_semidist(s, a, b, false) == doctest::Approx(brute_semidist(s, a, b)));
  CHECK(hausdorff_semidist(s, b, a, false) == doctest::Approx(brute_semidist(s, b, a)));
  CHECK(hausdorff_semidist(s, a, a) == 0.0);

  // Subset gives zero.
  AttractorSample sub;
  sub.add(a.states[2], AttractorSample::Source::trajectory_tail, 0);
  sub.add(a.states[5], AttractorSample::Source::trajectory_tail, 0);
  CHECK(hausdorff_semidist(s, sub, a) == 0.0);

  // Segments can only shrink the infimum; a segment midpoint is at distance 0.
  for (int i = 0; i + 1 < 5; ++i)
    b.link(i, i + 1);
  CHECK(hausdorff_semidist(s, a, b, true) <= hausdorff_semidist(s, a, b, false) + 1e-14);
  AttractorSample mid;
  mid.add(0.5 * (b.states[1] + b.states[2]), AttractorSample::Source::trajectory_tail, 0);
  CHECK(hausdorff_semidist(s, mid, b, true) < 1e-12);
  CHECK(hausdorff_semidist(s, mid, b, false) > 0.1);

  AttractorSample wrong;
  wrong.add(Vector::Zero(3), AttractorSample::Source::trajectory_tail, 0);
  CHECK_THROWS_AS(hausdorff_semidist(s, wrong, b), DomainError);
}

TEST_CASE("initial grid") {
  const FemSystem &s = fixtures::scenario(0.0);
  const auto grid = initial_grid(s, 3, {-1, 0, 1}, 2.0, 6);
  CHECK(grid.size() == 6);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(s.h1(grid[i]) == doctest::Approx(2.0));
    for (std::size_t j = 0; j < i; ++j)
      CHECK(s.h1(grid[i] - grid[j]) > 1e-6);
  }
  CHECK(initial_grid(s, 2, {-1, 0, 1}, 1.0, 100).size() <= 8);
}

TEST_CASE("unstable directions of the step map") {
  const FemSystem &s = fixtures::scenario(0.2);
  const ImexStepper stepper(s, 0.05);
  const Vector zero = Vector::Zero(static_cast<Eigen::Index>(s.size()));
  const PencilEigenpairs d = unstable_directions(stepper, zero, 1);
  REQUIRE(d.values.size() == 1);
  const Eigen::MatrixXd A = Eigen::MatrixXd(s.system() - s.apply_Fprime(zero));
  const Eigen::MatrixXd B = Eigen::MatrixXd(stepper.lhs());
  const double ref = oracle::dense_pencil(A, B)[0];
  CHECK(d.values[0] == doctest::Approx(ref).epsilon(1e-7));
  CHECK(d.values[0] < 0.0);
}

TEST_CASE("manifold patches and tangency") {
  const FemSystem &s = fixtures::scenario(0.0);
  const auto eq = find_all_equilibria(s);
  REQUIRE(eq.size() == 3);
  const ImexStepper stepper(s, 0.01);
  ManifoldOptions opts;
  const ManifoldPatch well = unstable_manifold_patch(stepper, eq[0], opts);
  CHECK(well.directions.empty());
  CHECK(well.local.size() == 1);

  const ManifoldPatch saddle = unstable_manifold_patch(stepper, eq[1], opts);
  REQUIRE(saddle.directions.size() == 1);
  CHECK(s.h1(saddle.directions[0]) == doctest::Approx(1.0));
  CHECK(saddle.exit_count == 2);
  for (const auto &u : saddle.local.states)
    CHECK(s.h1(u - saddle.base) <= opts.delta * (1 + 1e-12));
  // The two branches of the trace end near the two wells.
  for (int w : {0, 2}) {
    double near = 1e300;
    for (const auto &u : saddle.trace.states)
      near = std::min(near, s.h1(u - eq[w].state));
    CHECK(near < 0.05);
  }

  std::vector<double> r{0.1, 0.05, 0.025}, dev;
  for (double radius : r)
    dev.push_back(tangency_deviation(s, saddle, radius));
  CHECK(dev[2] < dev[1]);
  CHECK(dev[1] < dev[0]);
  CHECK(oracle::loglog_fit(r, dev) >= 1.5);
}

TEST_CASE("attractor sample stays bounded and contains the equilibria") {
  const FemSystem &s = fixtures::scenario(0.1);
  const auto eq = find_all_equilibria(s);
  const ImexStepper stepper(s, 0.01);
  AttractorOptions o;
  o.t_transient = 3.0;
  o.t_sample = 2.0;
  const auto init = initial_grid(s, 2, {-1, 0, 1}, 3.0, 4);
  const AttractorSample a = sample_attractor(stepper, init, eq, {}, o);
  CHECK(a.max_h1(s) < 3.0);
  int equilibria = 0;
  for (auto src : a.source)
    equilibria += src == AttractorSample::Source::equilibrium;
  CHECK(equilibria == 3);
  for (const auto &l : a.links) {
    CHECK(l[0] >= 0);
    CHECK(static_cast<std::size_t>(l[1]) < a.size());
  }
}
