#include "oscistrip/linalg.hpp"

#include "oscistrip/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace oscistrip {

SpdSolver::SpdSolver(const SparseMatrix &a)
    : llt_(std::make_shared<Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower,
                                                 Eigen::AMDOrdering<int>>>()) {
  llt_->compute(a);
  if (llt_->info() != Eigen::Success)
    throw NumericalError("sparse Cholesky factorization failed (matrix not SPD?)");
}

Vector SpdSolver::solve(const Vector &b) const { return llt_->solve(b); }
Matrix SpdSolver::solve(const Matrix &b) const { return llt_->solve(b); }

SymmetricSolver::SymmetricSolver(const SparseMatrix &a)
    : ldlt_(std::make_shared<Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower,
                                                   Eigen::AMDOrdering<int>>>()) {
  ldlt_->compute(a);
  if (ldlt_->info() != Eigen::Success)
    throw NumericalError("sparse LDL^T factorization failed (zero pivot)");
  const Vector d = ldlt_->vectorD();
  negatives_ = static_cast<int>((d.array() < 0.0).count());
  min_abs_pivot_ = d.cwiseAbs().minCoeff();
}

Vector SymmetricSolver::solve(const Vector &b) const { return ldlt_->solve(b); }
Matrix SymmetricSolver::solve(const Matrix &b) const { return ldlt_->solve(b); }

int count_below(const SparseMatrix &a, const SparseMatrix &b, double sigma) {
  try {
    return SymmetricSolver(SparseMatrix(a - sigma * b)).negative_count();
  } catch (const NumericalError &) {
    // sigma sits on an eigenvalue; the count strictly below is unchanged by
    // a slightly smaller shift.
    const double nudged = sigma - 1e-10 * std::max(1.0, std::abs(sigma));
    return SymmetricSolver(SparseMatrix(a - nudged * b)).negative_count();
  }
}

namespace {

Matrix random_block(Eigen::Index n, int p, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix x(n, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      x(i, j) = u(rng);
  x.col(0).setOnes();
  return x;
}

Matrix orthonormalize(const Matrix &y) {
  Eigen::HouseholderQR<Matrix> qr(y);
  return qr.householderQ() * Matrix::Identity(y.rows(), y.cols());
}

struct Ritz {
  Vector values;
  Matrix vectors;
};

Ritz rayleigh_ritz(const SparseMatrix &a, const SparseMatrix &b, const Matrix &q) {
  Matrix ap = q.transpose() * (a * q);
  Matrix bp = q.transpose() * (b * q);
  ap = 0.5 * (ap + ap.transpose());
  bp = 0.5 * (bp + bp.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(ap, bp);
  if (es.info() != Eigen::Success)
    throw NumericalError("Rayleigh-Ritz projection failed");
  return {es.eigenvalues(), q * es.eigenvectors()};
}

} // namespace

PencilEigenpairs lowest_pencil_eigenpairs(const SparseMatrix &a, const SparseMatrix &b, int k,
                                          const PencilOptions &opts) {
  const Eigen::Index n = a.rows();
  if (k < 1 || k > n)
    throw NumericalError("requested eigenpair count out of range");
  const int p = static_cast<int>(std::min<Eigen::Index>(n, k + opts.guard_vectors));

  // Upper bound for the lowest eigenvalue from Rayleigh quotients.
  Matrix x = random_block(n, p, opts.seed);
  double upper = std::numeric_limits<double>::infinity();
  for (int j = 0; j < p; ++j) {
    const Vector c = x.col(j);
    upper = std::min(upper, c.dot(a * c) / c.dot(b * c));
  }
  // Lower bound: step down until A - sigma B is positive definite.
  double gap = std::max(1.0, std::abs(upper));
  double lower = upper - gap;
  for (int it = 0; count_below(a, b, lower) > 0; ++it) {
    if (it > 60)
      throw NumericalError("could not bracket the lowest pencil eigenvalue");
    gap *= 2.0;
    lower = upper - gap;
  }
  double hi = upper;
  for (int it = 0; it < opts.bisection_steps; ++it) {
    const double mid = 0.5 * (lower + hi);
    if (count_below(a, b, mid) == 0)
      lower = mid;
    else
      hi = mid;
  }
  const double sigma = lower - 1e-3 * std::max(hi - lower, 1e-12 * std::max(1.0, std::abs(lower)));
  const SparseMatrix shifted = a - sigma * b;
  const SymmetricSolver solver(shifted);
  if (solver.negative_count() != 0)
    throw NumericalError("pencil shift is not below the spectrum");

  Vector prev = Vector::Constant(k, std::numeric_limits<double>::infinity());
  PencilEigenpairs out;
  Matrix q = orthonormalize(x);
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const Matrix bq = b * q;
    q = orthonormalize(solver.solve(bq));
    Ritz r = rayleigh_ritz(a, b, q);
    const Vector head = r.values.head(k);
    const double scale = std::max(1.0, head.cwiseAbs().maxCoeff());
    const double change = (head - prev).cwiseAbs().maxCoeff() / scale;
    prev = head;
    q = r.vectors;
    if (change < opts.tol || (it == opts.max_iterations && change < 1e-6)) {
      out.values = head;
      out.vectors = r.vectors.leftCols(k);
      out.iterations = it;
      return out;
    }
  }
  throw NumericalError("pencil eigensolver did not converge");
}

double pencil_eigenvalue(const SparseMatrix &a, const SparseMatrix &b, int index,
                         double rel_tol) {
  const Eigen::Index n = a.rows();
  if (index < 1 || index > n)
    throw NumericalError("eigenvalue index out of range");
  // Upper bracket: raise until at least `index` eigenvalues lie below.
  const Vector ones = Vector::Ones(n);
  double hi = ones.dot(a * ones) / ones.dot(b * ones);
  double step = std::max(1.0, std::abs(hi));
  for (int it = 0; count_below(a, b, hi) < index; ++it) {
    if (it > 60)
      throw NumericalError("could not bracket the pencil eigenvalue");
    hi += step;
    step *= 2.0;
  }
  double gap = std::max(1.0, std::abs(hi));
  double lo = hi - gap;
  for (int it = 0; count_below(a, b, lo) >= index; ++it) {
    if (it > 60)
      throw NumericalError("could not bracket the pencil eigenvalue");
    gap *= 2.0;
    lo = hi - gap;
  }
  // Invariant: fewer than `index` eigenvalues below lo, at least `index` below hi.
  while (hi - lo > rel_tol * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(a, b, mid) < index)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double lowest_pencil_eigenvalue(const SparseMatrix &a, const SparseMatrix &b, double rel_tol) {
  return pencil_eigenvalue(a, b, 1, rel_tol);
}

double largest_abs_pencil_eigenvalue(const SparseMatrix &a, const SparseMatrix &b,
                                     const SpdSolver &b_solver, const PencilOptions &opts) {
  if (a.nonZeros() == 0 || a.cwiseAbs().sum() == 0.0)
    return 0.0;
  const Eigen::Index n = a.rows();
  const int p = static_cast<int>(std::min<Eigen::Index>(n, 8));
  Matrix q = orthonormalize(random_block(n, p, opts.seed));
  double prev = 0.0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    q = orthonormalize(b_solver.solve(Matrix(a * q)));
    const Ritz r = rayleigh_ritz(a, b, q);
    const double top = std::max(std::abs(r.values.minCoeff()), std::abs(r.values.maxCoeff()));
    if (top == 0.0)
      return 0.0;
    if (it > 1 && std::abs(top - prev) <= opts.tol * top)
      return top;
    prev = top;
    q = r.vectors;
  }
  return prev;
}

} // namespace oscistrip
