#pragma once

#include "oscistrip/geometry.hpp"
#include "oscistrip/nonlinearity.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace oscistrip {

/// Potential preset V(s), pulled back to the strip as constant in depth;
/// the limit potential is then mu(s) V(s).
struct PotentialPreset {
  std::string name = "zero"; // zero | constant | cosine
  double value = 0.0;        // constant level, or mean for cosine
  double amplitude = 0.0;    // cosine: V(s) = value + amplitude cos(s)

  bool is_zero() const { return name == "zero"; }
  double operator()(double s) const;
  double min_value() const;
};

struct ExperimentConfig {
  // geometry
  std::string curve = "circle";
  double radius = 1.0;
  double ellipse_a = 1.0, ellipse_b = 1.0;
  std::string profile = "two-plus-cos";
  double profile_a = 2.0, profile_b = 0.0, profile_c = 1.0, profile_m = 0.0;
  double eps_clamp = 1.0;

  std::vector<double> ladder{0.2, 0.1, 0.05, 0.025};

  // mesh
  double h_interior = 0.1;
  double h_boundary = 0.00625;
  double fine_depth = 0.075;

  // quadrature: conc_integral layout and the FEM strip rule layout
  int beta_points = 4;
  int s_points = 8;
  int fem_beta_points = 2;
  int fem_s_points = 3;
  std::size_t mc_samples = 2'000'000;
  double mc_epsilon = 0.1;
  int mc_integrands = 10;

  // operator studies (coercivity, operator gap, linear semigroup)
  PotentialPreset operator_potential{"constant", 1.0, 0.0};
  double operator_lambda = 1.0;

  // bistable scenario (nonlinear semigroup, equilibria, attractors)
  std::string nonlinearity = "bistable";
  double f_a = 1.0, f_b = 1.0;
  double dissipation_threshold = 1.5;
  PotentialPreset scenario_potential{"constant", 0.75, 0.0};
  std::optional<double> scenario_lambda; // empty = calibrate

  // time stepping
  double dt = 1e-3;
  double t_linear = 2.0;
  double tau = 2.0;
  double attractor_dt = 1e-2;
  double t_transient = 10.0;
  double t_sample = 10.0;

  // tolerances
  double newton_tol = 1e-10;
  double gap_tol = 1e-3;
  double delta = 0.1;
  double branch_delta = 0.5;
  double dedup = 1e-4;

  // attractors
  int modes = 4;
  std::vector<int> coefficients{-2, -1, 0, 1, 2};
  double initial_radius = 5.0;
  int max_initial = 8;
  double spacing = 0.01;
  double manifold_spacing = 0.005;
  double t_grow = 20.0;
  double seed_fraction = 1e-2;
  double absorbing_radius = 10.0;

  // run
  std::uint64_t seed = 20240611;
  std::string out = "results";

  BoundaryCurve make_curve() const;
  OscillationProfile make_profile() const;
  Nonlinearity make_nonlinearity() const;

  /// Enforces the invariants; throws ConfigError naming the field.
  void validate() const;
  /// INI text that reproduces this configuration.
  std::string echo() const;
};

/// Parses INI text (sections [geometry], [ladder], [mesh], [quadrature],
/// [operators], [scenario], [time], [tolerances], [attractors], [run]).
/// Throws ConfigError with the line number on syntax errors and the field
/// name on invalid values; unknown keys are rejected.
ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::string &path);

} // namespace oscistrip
