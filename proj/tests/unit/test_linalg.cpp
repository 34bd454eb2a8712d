#include "../oracles.hpp"
#include "oscistrip/errors.hpp"
#include "oscistrip/linalg.hpp"

#include <doctest.h>

#include <random>

using namespace oscistrip;

namespace {

// Tridiagonal-plus-random-band symmetric pair with B SPD.
struct Pencil {
  SparseMatrix a, b;
  Matrix da, db;
};

Pencil random_pencil(int n, unsigned seed, double shift) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a = Matrix::Zero(n, n), b = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 2.0 + shift + 0.3 * u(rng);
    b(i, i) = 2.0 + 0.5 * std::abs(u(rng));
    if (i + 1 < n) {
      a(i, i + 1) = a(i + 1, i) = -1.0 + 0.2 * u(rng);
      b(i, i + 1) = b(i + 1, i) = 0.4 * u(rng);
    }
    if (i + 5 < n)
      a(i, i + 5) = a(i + 5, i) = 0.3 * u(rng);
  }
  return {a.sparseView(), b.sparseView(), a, b};
}

} // namespace

TEST_CASE("pencil eigenvalues against a dense oracle") {
  for (double shift : {0.0, -1.5}) {
    const Pencil p = random_pencil(80, 7, shift);
    const Vector ref = oracle::dense_pencil(p.da, p.db);
    for (int idx : {1, 2, 5})
      CHECK(pencil_eigenvalue(p.a, p.b, idx) ==
            doctest::Approx(ref[idx - 1]).epsilon(1e-8).scale(1.0));
    CHECK(lowest_pencil_eigenvalue(p.a, p.b) == doctest::Approx(ref[0]).epsilon(1e-8).scale(1.0));
    const PencilEigenpairs pairs = lowest_pencil_eigenpairs(p.a, p.b, 4);
    for (int i = 0; i < 4; ++i) {
      CHECK(pairs.values[i] == doctest::Approx(ref[i]).epsilon(1e-7).scale(1.0));
      const Vector x = pairs.vectors.col(i);
      CHECK((p.a * x - pairs.values[i] * (p.b * x)).norm() < 1e-4);
    }
    const Matrix gram = pairs.vectors.transpose() * (p.db * pairs.vectors);
    CHECK((gram - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-8);
    const double big = std::max(std::abs(ref[0]), std::abs(ref[ref.size() - 1]));
    CHECK(largest_abs_pencil_eigenvalue(p.a, p.b, SpdSolver(p.b)) ==
          doctest::Approx(big).epsilon(1e-6));
  }
}

TEST_CASE("property: inertia counts match the dense spectrum") {
  const Pencil p = random_pencil(60, 11, -1.0);
  const Vector ref = oracle::dense_pencil(p.da, p.db);
  for (double sigma : {-5.0, -0.7, 0.0, 0.3, 1.1, 9.0}) {
    const int expected = static_cast<int>((ref.array() < sigma).count());
    CHECK(count_below(p.a, p.b, sigma) == expected);
  }
}

TEST_CASE("shift exactly on an eigenvalue") {
  const Pencil p = random_pencil(30, 5, 0.0);
  // A = 2B: every eigenvalue equals 2.
  const SparseMatrix a = 2.0 * p.b;
  CHECK(count_below(a, p.b, 2.0) == 0);
  CHECK(count_below(a, p.b, 2.0 + 1e-6) == 30);
  CHECK(lowest_pencil_eigenvalue(a, p.b) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("solvers") {
  const Pencil p = random_pencil(40, 2, 0.0);
  const Vector rhs = Vector::LinSpaced(40, -1.0, 1.0);
  CHECK((p.db * SpdSolver(p.b).solve(rhs) - rhs).norm() < 1e-12);
  const Pencil q = random_pencil(40, 2, -2.5);
  const SymmetricSolver s(q.a);
  CHECK((q.da * s.solve(rhs) - rhs).norm() < 1e-10);
  CHECK(s.negative_count() == static_cast<int>((oracle::dense_pencil(q.da, Matrix::Identity(40, 40)).array() < 0).count()));
  CHECK_THROWS_AS(SpdSolver(q.a), NumericalError);
  CHECK(largest_abs_pencil_eigenvalue(SparseMatrix(40, 40), p.b, SpdSolver(p.b)) == 0.0);
}
