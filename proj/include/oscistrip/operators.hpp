#pragma once

#include "oscistrip/fem.hpp"

#include <vector>

namespace oscistrip {

/// Norm of P_eps - P_0 from the discrete H1 space to its Riesz dual: the
/// largest |theta| of (P_eps - P_0) x = theta (K + M) x.
double potential_operator_gap(const FemSystem &fem_eps, const FemSystem &fem_0);

/// Same, assembling P_eps from a strip potential and P_0 = int V0 u v dS on
/// the mesh of `fem`.
double potential_operator_gap(const FemSystem &fem, const StripRegion &region,
                              const StripPotential &V_eps, const BoundaryWeight &V_0,
                              const QuadSpec &spec);

/// Fixed set of smooth test fields (polynomials and low trigonometric modes).
std::vector<ScalarField> smooth_test_fields(int count = 20);

/// max over the fields of dual((S_eps - S_0) u) / dual(S_0 u).
double operator_gap_estimate(const FemSystem &fem_eps, const FemSystem &fem_0,
                             const std::vector<Vector> &fields);

/// Largest eigenvalue of (R, K + M), where R is the reaction measure
/// (strip or boundary) with unit weight: the squared constant of
/// (1/eps) int_{omega_eps} v^2 <= C h1(v)^2.
double reaction_trace_constant(const FemSystem &fem);

/// Total weight of the reaction measure, i.e. 1^T R 1.
double reaction_measure(const FemSystem &fem);

/// Constants implied by |f|, |f'| <= K_f: dual(F(u)) <= K_f sqrt(|R| C) and
/// dual(F(u) - F(v)) <= K_f C h1(u - v), with C the trace constant.
struct ReactionBounds {
  double trace_constant = 0.0;
  double measure = 0.0;
  double bound_k = 0.0;
  double lipschitz_l = 0.0;
};
ReactionBounds reaction_bounds(const FemSystem &fem);

struct FrechetCheck {
  std::vector<double> h;
  std::vector<double> error; // dual((F(u + h w) - F(u)) / h - J(u) w)
  double order = 0.0;        // least-squares slope of log error against log h
};

/// Finite-difference check of apply_Fprime against apply_F.
FrechetCheck frechet_check(const FemSystem &fem, const Vector &u, const Vector &w,
                           const std::vector<double> &h);

/// Least-squares slope of log(y) against log(x), skipping non-positive y.
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

} // namespace oscistrip
