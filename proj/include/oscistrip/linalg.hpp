#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <memory>

namespace oscistrip {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Sparse Cholesky of a symmetric positive definite matrix.
class SpdSolver {
public:
  SpdSolver() = default;
  explicit SpdSolver(const SparseMatrix &a);

  Vector solve(const Vector &b) const;
  Matrix solve(const Matrix &b) const;
  bool ready() const { return static_cast<bool>(llt_); }

private:
  std::shared_ptr<Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>> llt_;
};

/// Sparse LDL^T of a symmetric, possibly indefinite matrix (no pivoting).
class SymmetricSolver {
public:
  explicit SymmetricSolver(const SparseMatrix &a);

  Vector solve(const Vector &b) const;
  Matrix solve(const Matrix &b) const;
  /// Number of negative pivots, i.e. negative eigenvalues (Sylvester).
  int negative_count() const { return negatives_; }
  double min_abs_pivot() const { return min_abs_pivot_; }

private:
  std::shared_ptr<Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>> ldlt_;
  int negatives_ = 0;
  double min_abs_pivot_ = 0.0;
};

struct PencilEigenpairs {
  Vector values;  // ascending
  Matrix vectors; // columns, B-orthonormal
  int iterations = 0;
};

struct PencilOptions {
  double tol = 1e-9;
  int max_iterations = 600;
  int guard_vectors = 4;
  int bisection_steps = 8;
  unsigned seed = 12345;
};

/// k lowest eigenpairs of the symmetric pencil A x = theta B x with B SPD,
/// by shift-invert subspace iteration. The shift is placed below the
/// spectrum using LDL^T inertia counts. Convergence is judged on the Ritz
/// values, which stay accurate inside eigenvalue clusters where the vectors
/// do not settle. Throws NumericalError on failure.
PencilEigenpairs lowest_pencil_eigenpairs(const SparseMatrix &a, const SparseMatrix &b, int k,
                                          const PencilOptions &opts = {});

/// index-th (1-based, ascending) eigenvalue of A x = theta B x by bisection
/// on inertia counts, to relative tolerance rel_tol.
double pencil_eigenvalue(const SparseMatrix &a, const SparseMatrix &b, int index,
                         double rel_tol = 1e-10);
double lowest_pencil_eigenvalue(const SparseMatrix &a, const SparseMatrix &b,
                                double rel_tol = 1e-10);

/// Number of eigenvalues of A x = theta B x below sigma.
int count_below(const SparseMatrix &a, const SparseMatrix &b, double sigma);

/// Largest |theta| of A x = theta B x, given a factorization of B.
double largest_abs_pencil_eigenvalue(const SparseMatrix &a, const SparseMatrix &b,
                                     const SpdSolver &b_solver, const PencilOptions &opts = {});

} // namespace oscistrip
