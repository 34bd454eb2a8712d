#include "oscistrip/equilibria.hpp"

#include "oscistrip/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

namespace oscistrip {

namespace {

Vector residual_vector(const FemSystem &fem, const Vector &u) {
  return fem.system() * u - fem.apply_F(u);
}

SparseMatrix newton_matrix(const FemSystem &fem, const Vector &u) {
  return fem.system() - fem.apply_Fprime(u);
}

} // namespace

EquilibriumPoint newton_equilibrium(const FemSystem &fem, const Vector &guess,
                                    const NewtonOptions &opts) {
  if (!(opts.tol > 0.0))
    throw DomainError("newton tolerance must be positive");
  fem.check_size(guess);
  Vector u = guess;
  Vector r = residual_vector(fem, u);
  double res = fem.dual(r);
  int it = 0;
  for (; res > opts.tol; ++it) {
    if (it >= opts.max_iterations) {
      std::ostringstream msg;
      msg << "newton did not converge in " << opts.max_iterations
          << " iterations; last residual " << res;
      throw NumericalError(msg.str());
    }
    const SparseMatrix a = newton_matrix(fem, u);
    const SymmetricSolver solver(a);
    const double diag = a.diagonal().cwiseAbs().maxCoeff();
    if (solver.min_abs_pivot() < 1e-13 * diag)
      throw NumericalError("singular newton matrix: equilibrium close to non-hyperbolic");
    const Vector d = solver.solve(Vector(-r));
    double alpha = 1.0;
    Vector trial = u + d;
    Vector r_trial = residual_vector(fem, trial);
    double res_trial = fem.dual(r_trial);
    for (int h = 0; h < opts.max_halvings && !(res_trial < res); ++h) {
      alpha *= 0.5;
      trial = u + alpha * d;
      r_trial = residual_vector(fem, trial);
      res_trial = fem.dual(r_trial);
    }
    if (!std::isfinite(res_trial))
      throw NumericalError("newton produced a non-finite residual");
    u = std::move(trial);
    r = std::move(r_trial);
    res = res_trial;
  }
  EquilibriumPoint p;
  p.state = std::move(u);
  p.epsilon = fem.epsilon();
  p.residual = res;
  p.iterations = it;
  p.h1_norm = fem.h1(p.state);
  if (opts.classify)
    classify(fem, p, opts);
  return p;
}

Vector linearization_spectrum(const FemSystem &fem, const Vector &u, int k) {
  const SparseMatrix a = newton_matrix(fem, u);
  return lowest_pencil_eigenpairs(a, fem.norm_matrix(), k).values;
}

void classify(const FemSystem &fem, EquilibriumPoint &p, const NewtonOptions &opts) {
  const SparseMatrix a = newton_matrix(fem, p.state);
  p.morse_index = SymmetricSolver(a).negative_count();
  const int k = std::min<int>(static_cast<int>(fem.size()),
                              std::max(opts.spectrum_size, p.morse_index + 2));
  PencilEigenpairs pairs = lowest_pencil_eigenpairs(a, fem.norm_matrix(), k);
  p.spectrum = std::move(pairs.values);
  p.modes = std::move(pairs.vectors);
  p.min_abs_eig = p.spectrum.cwiseAbs().minCoeff();
  p.hyperbolic = is_hyperbolic(p, opts.gap_tol);
  p.h1_norm = fem.h1(p.state);
  p.energy = fem.energy(p.state);
}

bool is_hyperbolic(const EquilibriumPoint &point, double gap_tol) {
  if (point.spectrum.size() == 0)
    throw DomainError("equilibrium spectrum not computed");
  return point.spectrum.cwiseAbs().minCoeff() >= gap_tol;
}

EquilibriumBranch continue_branch(const std::function<const FemSystem &(double)> &system_for,
                                  const std::vector<double> &eps_ladder,
                                  const EquilibriumPoint &base, double delta,
                                  const NewtonOptions &opts) {
  for (std::size_t i = 1; i < eps_ladder.size(); ++i)
    if (!(eps_ladder[i] < eps_ladder[i - 1]))
      throw ConfigError("epsilon ladder must descend");
  EquilibriumBranch branch;
  Vector guess = base.state;
  for (double eps : eps_ladder) {
    const FemSystem &fem = system_for(eps);
    EquilibriumPoint p = newton_equilibrium(fem, guess, opts);
    const double d = fem.h1(p.state - base.state);
    if (d > delta) {
      std::ostringstream msg;
      msg << "branch left the delta-ball at eps = " << eps << ": distance " << d
          << " > delta = " << delta;
      throw BranchEscape(msg.str());
    }
    guess = p.state;
    branch.epsilon.push_back(eps);
    branch.distance.push_back(d);
    branch.points.push_back(std::move(p));
  }
  return branch;
}

std::vector<int> hungarian(const std::vector<std::vector<double>> &cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  // Potentials formulation, 1-based with a virtual column 0.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j])
          continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assign(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0)
      assign[p[j] - 1] = j - 1;
  return assign;
}

Matching match_equilibria(const FemSystem &norm, const std::vector<EquilibriumPoint> &e_eps,
                          const std::vector<EquilibriumPoint> &e_0) {
  if (e_eps.size() != e_0.size()) {
    std::ostringstream msg;
    msg << "equilibrium count mismatch: " << e_eps.size() << " at eps versus " << e_0.size()
        << " in the limit";
    throw CountMismatch(msg.str());
  }
  const std::size_t n = e_eps.size();
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cost[i][j] = norm.h1(e_eps[i].state - e_0[j].state);
  Matching m;
  m.partner = hungarian(cost);
  for (std::size_t i = 0; i < n; ++i) {
    m.distance.push_back(cost[i][m.partner[i]]);
    m.total += m.distance.back();
  }
  return m;
}

std::vector<EquilibriumPoint> find_all_equilibria(const FemSystem &fem, const SeedStrategy &seeds,
                                                  const NewtonOptions &opts,
                                                  std::vector<std::string> *log) {
  const Eigen::Index n = static_cast<Eigen::Index>(fem.size());
  std::vector<EquilibriumPoint> found;
  std::vector<Vector> pending;
  for (double c : seeds.constants)
    pending.push_back(Vector::Constant(n, c));

  auto known = [&](const Vector &u) {
    for (const auto &p : found)
      if (fem.h1(u - p.state) < seeds.dedup)
        return true;
    return false;
  };

  NewtonOptions raw = opts;
  raw.classify = false;
  NewtonOptions full = opts;
  full.spectrum_size = std::max(opts.spectrum_size, seeds.eigen_directions);

  for (int round = 0; round < seeds.max_rounds && !pending.empty(); ++round) {
    // Seeds are independent; solve them in parallel, merge in seed order.
    std::vector<std::optional<EquilibriumPoint>> results(pending.size());
    std::vector<std::string> errors(pending.size());
    parallel_for(pending.size(), [&](std::size_t i) {
      try {
        results[i] = newton_equilibrium(fem, pending[i], raw);
      } catch (const NumericalError &e) {
        errors[i] = e.what();
      }
    });
    const std::size_t before = found.size();
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (!results[i]) {
        if (log)
          log->push_back("seed " + std::to_string(i) + " failed: " + errors[i]);
        continue;
      }
      if (!known(results[i]->state)) {
        classify(fem, *results[i], full);
        found.push_back(std::move(*results[i]));
      }
    }
    pending.clear();
    if (seeds.eigen_directions <= 0 || seeds.perturbation <= 0.0)
      break;
    for (std::size_t i = before; i < found.size(); ++i) {
      const EquilibriumPoint &p = found[i];
      for (int k = 0; k < seeds.eigen_directions && k < p.modes.cols(); ++k) {
        Vector v = p.modes.col(k);
        v *= seeds.perturbation / fem.h1(v);
        pending.push_back(p.state + v);
        pending.push_back(p.state - v);
      }
    }
  }
  const Vector ones = Vector::Ones(n);
  const Vector weights = fem.mass() * ones;
  std::sort(found.begin(), found.end(), [&](const EquilibriumPoint &a, const EquilibriumPoint &b) {
    return weights.dot(a.state) < weights.dot(b.state);
  });
  return found;
}

void write_equilibria_csv(const std::string &path, const std::vector<EquilibriumReportRow> &rows) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out << "epsilon,index,h1_norm,residual,min_eig,morse_index,dist_to_limit_partner\n"
      << std::setprecision(12);
  for (const auto &r : rows)
    out << r.epsilon << ',' << r.index << ',' << r.h1_norm << ',' << r.residual << ','
        << r.min_eig << ',' << r.morse_index << ',' << r.dist_to_limit_partner << '\n';
}

} // namespace oscistrip
