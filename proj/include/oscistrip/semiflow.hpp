#pragma once

#include "oscistrip/fem.hpp"

#include <string>
#include <vector>

namespace oscistrip {

/// Backward Euler in the linear part, forward in the reaction:
///   (M + dt S) u+ = M u + dt F(u).
/// The factorization of M + dt S is built once and shared by copies.
class ImexStepper {
public:
  ImexStepper(const FemSystem &fem, double dt);

  Vector step(const Vector &u) const;
  double dt() const { return dt_; }
  const FemSystem &system() const { return *fem_; }
  /// M + dt S.
  const SparseMatrix &lhs() const { return lhs_; }

private:
  const FemSystem *fem_;
  double dt_;
  SparseMatrix lhs_;
  SpdSolver solver_;
};

/// One IMEX step. Throws DomainError for dt <= 0 and NumericalError when the
/// new state is not finite.
Vector step_imex(const FemSystem &fem, const Vector &u, double dt);

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  double epsilon = 0.0;
  double dt = 0.0;
};

/// Repeated IMEX steps from phi up to t_end; every `stride`-th state is kept
/// (the initial and final states always are). dt must divide t_end.
Trajectory evolve(const ImexStepper &stepper, const Vector &phi, double t_end, int stride = 1);
Trajectory evolve(const FemSystem &fem, const Vector &phi, double t_end, double dt,
                  int stride = 1);

/// Number of steps of size dt in t_end; throws DomainError unless dt divides
/// t_end to within 1e-9 relative.
int step_count(double t_end, double dt);

struct GapSeries {
  std::vector<double> t;
  std::vector<double> gap;      // h1 distance between the two evolutions
  std::vector<double> weighted; // t^power e^{b t} gap
  double sup = 0.0;             // max of weighted
};

/// sup over the step grid of t^beta e^{b t} h1(e^{-t A_eps} phi - e^{-t A_0} phi),
/// both semigroups taken with F == 0 on the same mesh.
GapSeries linear_semigroup_gap(const FemSystem &fem_eps, const FemSystem &fem_0,
                               const Vector &phi, double t_end, double dt, double beta = 0.5,
                               double b = 0.0);

/// h1(T_eps(t) phi_eps - T_0(t) phi_0) on (0, tau] with weight t^gamma.
GapSeries nonlinear_semigroup_gap(const FemSystem &fem_eps, const FemSystem &fem_0,
                                  const Vector &phi_eps, const Vector &phi_0, double tau,
                                  double dt, double gamma = 0.5);

struct NormSample {
  double t = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;
  double energy = 0.0;
};

std::vector<NormSample> norm_series(const FemSystem &fem, const Trajectory &traj);
/// Writes t,l2,h1,energy.
void write_norm_series_csv(const std::string &path, const std::vector<NormSample> &rows);
void write_gap_series_csv(const std::string &path, const GapSeries &series);

/// Largest energy increase between consecutive recorded states.
double max_energy_increase(const std::vector<NormSample> &rows);

/// First recorded time after which h1 stays <= radius; NaN if never.
double absorption_time(const std::vector<NormSample> &rows, double radius);

} // namespace oscistrip
