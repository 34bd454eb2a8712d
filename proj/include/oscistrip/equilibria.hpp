#pragma once

#include "oscistrip/errors.hpp"
#include "oscistrip/fem.hpp"

#include <functional>
#include <string>
#include <vector>

namespace oscistrip {

struct EquilibriumPoint {
  Vector state;
  double epsilon = 0.0;
  double residual = 0.0; // dual norm of S u - F(u)
  Vector spectrum;       // lowest pencil eigenvalues of (S - J, K + M), ascending
  Matrix modes;          // matching eigenvectors, one per column
  double min_abs_eig = 0.0;
  bool hyperbolic = false;
  int morse_index = 0;
  int iterations = 0;
  double h1_norm = 0.0;
  double energy = 0.0;
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iterations = 50;
  int max_halvings = 8;
  double gap_tol = 1e-3;
  int spectrum_size = 3;
  bool classify = true; // fill spectrum, Morse index and flags after convergence
};

/// Damped Newton on G(u) = S u - F(u). Throws NumericalError with the last
/// residual on non-convergence, and when the Newton matrix is singular.
EquilibriumPoint newton_equilibrium(const FemSystem &fem, const Vector &guess,
                                    const NewtonOptions &opts = {});

/// k lowest eigenvalues of the pencil (S - J(u), K + M), ascending.
Vector linearization_spectrum(const FemSystem &fem, const Vector &u, int k);

bool is_hyperbolic(const EquilibriumPoint &point, double gap_tol);

/// Fills spectrum, Morse index (inertia of S - J) and hyperbolicity.
void classify(const FemSystem &fem, EquilibriumPoint &point, const NewtonOptions &opts);

struct EquilibriumBranch {
  std::vector<double> epsilon;
  std::vector<EquilibriumPoint> points;
  std::vector<double> distance; // h1 distance to the eps = 0 point
};

/// Thrown when a continued equilibrium leaves the delta-ball around u*_0.
class BranchEscape : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Newton along a descending epsilon ladder, each step started from the
/// previous branch point (the first from u*_0).
EquilibriumBranch continue_branch(const std::function<const FemSystem &(double)> &system_for,
                                  const std::vector<double> &eps_ladder,
                                  const EquilibriumPoint &base, double delta,
                                  const NewtonOptions &opts = {});

class CountMismatch : public NumericalError {
public:
  using NumericalError::NumericalError;
};

struct Matching {
  std::vector<int> partner;      // partner[i] = index in E_0 of E_eps[i]
  std::vector<double> distance;  // h1 distance of each pair
  double total = 0.0;
};

/// Minimum total h1 distance pairing (Hungarian algorithm).
/// Throws CountMismatch when the set sizes differ.
Matching match_equilibria(const FemSystem &norm, const std::vector<EquilibriumPoint> &e_eps,
                          const std::vector<EquilibriumPoint> &e_0);

/// Rectangular-free assignment on a square cost matrix; returns the column
/// assigned to each row.
std::vector<int> hungarian(const std::vector<std::vector<double>> &cost);

struct SeedStrategy {
  std::vector<double> constants{-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};
  double perturbation = 0.5;  // h1 size of the eigenvector kicks
  int eigen_directions = 1;   // lowest pencil eigenvectors used per point
  double dedup = 1e-4;
  int max_rounds = 3;
};

/// Converged Newton points from constant seeds plus eigenvector kicks of every
/// point found, deduplicated in h1 and sorted by mean nodal value.
/// Failed seeds are reported through `log` (may be empty).
std::vector<EquilibriumPoint> find_all_equilibria(const FemSystem &fem,
                                                  const SeedStrategy &seeds = {},
                                                  const NewtonOptions &opts = {},
                                                  std::vector<std::string> *log = nullptr);

/// epsilon,index,h1_norm,residual,min_eig,morse_index,dist_to_limit_partner
struct EquilibriumReportRow {
  double epsilon = 0.0;
  int index = 0;
  double h1_norm = 0.0;
  double residual = 0.0;
  double min_eig = 0.0;
  int morse_index = 0;
  double dist_to_limit_partner = 0.0;
};
void write_equilibria_csv(const std::string &path, const std::vector<EquilibriumReportRow> &rows);

} // namespace oscistrip
