#include "oscistrip/operators.hpp"

#include "oscistrip/errors.hpp"

#include <algorithm>
#include <cmath>

namespace oscistrip {

double potential_operator_gap(const FemSystem &fem_eps, const FemSystem &fem_0) {
  if (fem_eps.size() != fem_0.size())
    throw DomainError("operator gap needs both systems on one mesh");
  const SparseMatrix d = fem_eps.potential() - fem_0.potential();
  return largest_abs_pencil_eigenvalue(d, fem_0.norm_matrix(), fem_0.norm_solver());
}

double potential_operator_gap(const FemSystem &fem, const StripRegion &region,
                              const StripPotential &V_eps, const BoundaryWeight &V_0,
                              const QuadSpec &spec) {
  SparseMatrix d = assemble_strip_potential(fem.mesh(), region, V_eps, spec);
  if (V_0)
    d -= fem.boundary_mass(V_0);
  return largest_abs_pencil_eigenvalue(d, fem.norm_matrix(), fem.norm_solver());
}

std::vector<ScalarField> smooth_test_fields(int count) {
  std::vector<ScalarField> out;
  out.push_back(ScalarField::constant(1.0));
  out.push_back(ScalarField::from([](const Vec2 &p) { return p.x(); }));
  out.push_back(ScalarField::from([](const Vec2 &p) { return p.y(); }));
  out.push_back(ScalarField::from([](const Vec2 &p) { return p.x() * p.y(); }));
  out.push_back(ScalarField::from([](const Vec2 &p) { return p.x() * p.x() - p.y() * p.y(); }));
  out.push_back(ScalarField::from([](const Vec2 &p) { return p.squaredNorm(); }));
  out.push_back(ScalarField::from([](const Vec2 &p) { return p.x() * p.squaredNorm(); }));
  out.push_back(ScalarField::from([](const Vec2 &p) { return 1.0 + p.x() - 0.5 * p.y(); }));
  for (int k = 0; static_cast<int>(out.size()) < count; ++k) {
    const double a = 1.0 + (k % 3), b = 0.5 * (k / 3), c = 0.3 * k;
    if (k % 2 == 0)
      out.push_back(ScalarField::from(
          [=](const Vec2 &p) { return std::cos(a * p.x() + b * p.y() + c); }));
    else
      out.push_back(ScalarField::from(
          [=](const Vec2 &p) { return std::sin(b * p.x() - a * p.y() + c); }));
  }
  out.resize(static_cast<std::size_t>(count), ScalarField::constant(1.0));
  return out;
}

double operator_gap_estimate(const FemSystem &fem_eps, const FemSystem &fem_0,
                             const std::vector<Vector> &fields) {
  double worst = 0.0;
  const SparseMatrix d = fem_eps.system() - fem_0.system();
  for (const Vector &u : fields) {
    const double den = fem_0.dual(fem_0.system() * u);
    if (den == 0.0)
      continue;
    worst = std::max(worst, fem_0.dual(d * u) / den);
  }
  return worst;
}

namespace {

SparseMatrix unit_reaction(const FemSystem &fem) {
  const ConcentratedRule &rule = fem.reaction_rule();
  return rule.mass(fem.pattern(), std::vector<double>(rule.size(), 1.0));
}

} // namespace

double reaction_trace_constant(const FemSystem &fem) {
  return largest_abs_pencil_eigenvalue(unit_reaction(fem), fem.norm_matrix(), fem.norm_solver());
}

double reaction_measure(const FemSystem &fem) {
  double total = 0.0;
  for (const auto &n : fem.reaction_rule().nodes())
    total += n.weight;
  return total;
}

ReactionBounds reaction_bounds(const FemSystem &fem) {
  ReactionBounds b;
  b.trace_constant = reaction_trace_constant(fem);
  b.measure = reaction_measure(fem);
  const double kf = fem.nonlinearity().bound();
  b.bound_k = kf * std::sqrt(b.measure * b.trace_constant);
  b.lipschitz_l = kf * b.trace_constant;
  return b;
}

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(y[i] > 0.0) || !(x[i] > 0.0))
      continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2)
    return std::nan("");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

FrechetCheck frechet_check(const FemSystem &fem, const Vector &u, const Vector &w,
                           const std::vector<double> &h) {
  FrechetCheck out;
  const Vector f0 = fem.apply_F(u);
  const Vector jw = fem.apply_Fprime(u) * w;
  for (double step : h) {
    const Vector fd = (fem.apply_F(u + step * w) - f0) / step;
    out.h.push_back(step);
    out.error.push_back(fem.dual(fd - jw));
  }
  out.order = loglog_slope(out.h, out.error);
  return out;
}

} // namespace oscistrip
