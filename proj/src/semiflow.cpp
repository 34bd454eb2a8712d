#include "oscistrip/semiflow.hpp"

#include "oscistrip/errors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

namespace oscistrip {

ImexStepper::ImexStepper(const FemSystem &fem, double dt) : fem_(&fem), dt_(dt) {
  if (!(dt > 0.0))
    throw DomainError("time step must be positive");
  lhs_ = fem.mass() + dt * fem.system();
  solver_ = SpdSolver(lhs_);
}

Vector ImexStepper::step(const Vector &u) const {
  fem_->check_size(u);
  Vector rhs = fem_->mass() * u;
  if (fem_->nonlinearity().kind() != Nonlinearity::Kind::zero)
    rhs += dt_ * fem_->apply_F(u);
  Vector next = solver_.solve(rhs);
  if (!next.allFinite())
    throw NumericalError("non-finite state after IMEX step (blow-up)");
  return next;
}

Vector step_imex(const FemSystem &fem, const Vector &u, double dt) {
  return ImexStepper(fem, dt).step(u);
}

int step_count(double t_end, double dt) {
  if (!(t_end > 0.0) || !(dt > 0.0))
    throw DomainError("t_end and dt must be positive");
  const double n = t_end / dt;
  const double rounded = std::round(n);
  if (rounded < 1.0 || std::abs(n - rounded) > 1e-9 * std::max(1.0, n))
    throw DomainError("dt must divide t_end");
  return static_cast<int>(rounded);
}

Trajectory evolve(const ImexStepper &stepper, const Vector &phi, double t_end, int stride) {
  const int n = step_count(t_end, stepper.dt());
  stride = std::max(1, stride);
  Trajectory traj;
  traj.dt = stepper.dt();
  traj.epsilon = stepper.system().epsilon();
  traj.times.push_back(0.0);
  traj.states.push_back(phi);
  Vector u = phi;
  for (int k = 1; k <= n; ++k) {
    u = stepper.step(u);
    if (k % stride == 0 || k == n) {
      traj.times.push_back(k * stepper.dt());
      traj.states.push_back(u);
    }
  }
  return traj;
}

Trajectory evolve(const FemSystem &fem, const Vector &phi, double t_end, double dt, int stride) {
  const ImexStepper stepper(fem, dt);
  return evolve(stepper, phi, t_end, stride);
}

namespace {

GapSeries run_gap(const ImexStepper &a, const ImexStepper &b, const FemSystem &norm,
                  const Vector &phi_a, const Vector &phi_b, double t_end, double power,
                  double rate) {
  const int n = step_count(t_end, a.dt());
  GapSeries out;
  Vector u = phi_a, v = phi_b;
  for (int k = 1; k <= n; ++k) {
    u = a.step(u);
    v = b.step(v);
    const double t = k * a.dt();
    const double gap = norm.h1(u - v);
    const double w = std::pow(t, power) * std::exp(rate * t) * gap;
    out.t.push_back(t);
    out.gap.push_back(gap);
    out.weighted.push_back(w);
    out.sup = std::max(out.sup, w);
  }
  return out;
}

} // namespace

GapSeries linear_semigroup_gap(const FemSystem &fem_eps, const FemSystem &fem_0,
                               const Vector &phi, double t_end, double dt, double beta,
                               double b) {
  if (fem_eps.size() != fem_0.size())
    throw DomainError("semigroup comparison needs both systems on one mesh");
  const FemSystem lin_eps = fem_eps.with_nonlinearity(Nonlinearity::zero());
  const FemSystem lin_0 = fem_0.with_nonlinearity(Nonlinearity::zero());
  const ImexStepper a(lin_eps, dt), c(lin_0, dt);
  return run_gap(a, c, fem_0, phi, phi, t_end, beta, b);
}

GapSeries nonlinear_semigroup_gap(const FemSystem &fem_eps, const FemSystem &fem_0,
                                  const Vector &phi_eps, const Vector &phi_0, double tau,
                                  double dt, double gamma) {
  if (fem_eps.size() != fem_0.size())
    throw DomainError("semigroup comparison needs both systems on one mesh");
  const ImexStepper a(fem_eps, dt), c(fem_0, dt);
  return run_gap(a, c, fem_0, phi_eps, phi_0, tau, gamma, 0.0);
}

std::vector<NormSample> norm_series(const FemSystem &fem, const Trajectory &traj) {
  std::vector<NormSample> rows;
  rows.reserve(traj.states.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const Vector &u = traj.states[k];
    rows.push_back({traj.times[k], fem.l2(u), fem.h1(u), fem.energy(u)});
  }
  return rows;
}

void write_norm_series_csv(const std::string &path, const std::vector<NormSample> &rows) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out << "t,l2,h1,energy\n" << std::setprecision(12);
  for (const auto &r : rows)
    out << r.t << ',' << r.l2 << ',' << r.h1 << ',' << r.energy << '\n';
}

void write_gap_series_csv(const std::string &path, const GapSeries &series) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out << "t,gap,weighted\n" << std::setprecision(12);
  for (std::size_t k = 0; k < series.t.size(); ++k)
    out << series.t[k] << ',' << series.gap[k] << ',' << series.weighted[k] << '\n';
}

double max_energy_increase(const std::vector<NormSample> &rows) {
  double worst = 0.0;
  for (std::size_t k = 1; k < rows.size(); ++k)
    worst = std::max(worst, rows[k].energy - rows[k - 1].energy);
  return worst;
}

double absorption_time(const std::vector<NormSample> &rows, double radius) {
  double t = std::numeric_limits<double>::quiet_NaN();
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (it->h1 > radius)
      break;
    t = it->t;
  }
  return t;
}

} // namespace oscistrip
