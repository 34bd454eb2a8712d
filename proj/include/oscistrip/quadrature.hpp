#pragma once

#include "oscistrip/geometry.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace oscistrip {

/// A pointwise-evaluable field on the closure of the domain.
struct ScalarField {
  enum class Smoothness { smooth, nodal_fem };

  std::function<double(const Vec2 &)> eval;
  Smoothness smoothness = Smoothness::smooth;

  double operator()(const Vec2 &p) const { return eval(p); }

  static ScalarField constant(double c) {
    return {[c](const Vec2 &) { return c; }, Smoothness::smooth};
  }
  static ScalarField from(std::function<double(const Vec2 &)> fn) {
    return {std::move(fn), Smoothness::smooth};
  }
};

/// Tensor Gauss-Legendre layout in (beta, s) strip coordinates.
///
/// s-panels have width min(s_panel_factor * eps * l0, max_cell); each
/// s-node gets max(beta_panels, ceil(eps g_eps(s) / max_cell)) beta-panels.
/// max_cell <= 0 disables the absolute cap.
struct QuadSpec {
  int beta_points = 4;
  int s_points = 8;
  int beta_panels = 1;
  double s_panel_factor = 0.25;
  double max_cell = 0.0;
  std::size_t mc_samples = 2'000'000;

  void validate() const;
};

/// One node of the strip rule: the 1/eps factor and the Jacobian are folded
/// into `weight`, so sum(weight * h(point)) approximates (1/eps) int h.
struct StripNode {
  Vec2 point;
  double weight = 0.0;
  double s = 0.0;
  double beta = 0.0;
};

std::vector<StripNode> strip_nodes(const StripRegion &region, const QuadSpec &spec);

/// (1/eps) int_{omega_eps} h phi, evaluated in (beta, s) coordinates.
double conc_integral(const StripRegion &region, const ScalarField &h, const ScalarField &phi,
                     const QuadSpec &spec = {});

/// int_0^T weight(s) h(zeta(s)) phi(zeta(s)) ds.
double boundary_integral(const BoundaryCurve &curve, const std::function<double(double)> &weight,
                         const ScalarField &h, const ScalarField &phi);

struct ConvergenceRow {
  double epsilon = 0.0;
  double value = 0.0;
  double limit = 0.0;
  double abs_error = 0.0;
  double rate = 0.0; // NaN on the first row
};

/// Concentrating integrals along a descending epsilon ladder against the
/// boundary limit with weight mu.
std::vector<ConvergenceRow> conc_convergence_table(const BoundaryCurve &curve,
                                                   const OscillationProfile &profile,
                                                   const std::vector<double> &eps_ladder,
                                                   const ScalarField &h, const ScalarField &phi,
                                                   const QuadSpec &spec = {});

/// Least-squares slope of log(error) against log(epsilon); rows with zero
/// error are skipped. NaN when fewer than two usable rows remain.
double fitted_rate(const std::vector<ConvergenceRow> &rows);

/// Writes epsilon,value,limit,abs_error,rate.
void write_convergence_csv(const std::string &path, const std::vector<ConvergenceRow> &rows);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t hits = 0;
  std::size_t samples = 0;
};

/// Monte-Carlo estimates of (1/eps) int_{omega_eps} h phi for several
/// integrands from one point set: uniform samples in the band of depth
/// eps g1 along the boundary, filtered by strip_membership and scaled by the
/// band measure over eps.
std::vector<MonteCarloEstimate>
monte_carlo_conc_integrals(const StripRegion &region,
                           const std::vector<std::pair<ScalarField, ScalarField>> &integrands,
                           std::size_t samples, std::uint64_t seed);

/// ((1/eps) int_{omega_eps} |v|^q)^(1/q) for q in {2, 4}.
double strip_lq_norm(const StripRegion &region, const ScalarField &v, double q,
                     const QuadSpec &spec = {});

} // namespace oscistrip
