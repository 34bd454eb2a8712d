#pragma once

#include "oscistrip/equilibria.hpp"
#include "oscistrip/semiflow.hpp"

#include <array>
#include <string>
#include <vector>

namespace oscistrip {

/// Finite set of nodal states standing in for an attractor or a piece of an
/// unstable manifold. `links` join consecutive states of one trajectory; the
/// semidistances can optionally measure against those segments.
struct AttractorSample {
  enum class Source { trajectory_tail, unstable_manifold, equilibrium };

  std::vector<Vector> states;
  std::vector<Source> source;
  std::vector<double> times;
  std::vector<std::array<int, 2>> links;
  double epsilon = 0.0;
  double transient = 0.0;

  int add(Vector u, Source src, double t);
  void link(int a, int b) { links.push_back({a, b}); }
  /// Appends another sample, shifting its links.
  void append(const AttractorSample &other);
  std::size_t size() const { return states.size(); }
  double max_h1(const FemSystem &fem) const;
};

std::string to_string(AttractorSample::Source s);

struct ManifoldOptions {
  double delta = 0.1;
  int n_seeds = 2;
  double t_grow = 20.0;
  /// Seeds start at seed_fraction * delta from the equilibrium so that the
  /// part of the manifold inside the delta-ball is traced.
  double seed_fraction = 1e-2;
  /// A state is recorded once its h1 distance from the last recorded state
  /// reaches `spacing`.
  double spacing = 0.005;
};

struct ManifoldPatch {
  Vector base;
  double delta = 0.0;
  double seed_radius = 0.0;
  std::vector<Vector> directions; // unstable eigenvectors, unit h1 norm
  Vector growth_rates;            // kappa of the step map, negative = unstable
  AttractorSample local;          // base plus states within delta
  AttractorSample trace;          // base plus every recorded state
  int exit_count = 0;             // trajectories that left the delta-ball
};

/// Unstable directions of the IMEX step map at u: eigenpairs of the pencil
/// (S - J, M + dt S) with negative eigenvalue kappa = (1 - rho) / dt, where
/// rho is the multiplier of the linearized map.
PencilEigenpairs unstable_directions(const ImexStepper &stepper, const Vector &u, int count);

/// Seeds u* +- seed_radius * (unit unstable directions) and integrates for
/// t_grow. Morse index 0 gives the patch {u*}.
ManifoldPatch unstable_manifold_patch(const ImexStepper &stepper, const EquilibriumPoint &eq,
                                      const ManifoldOptions &opts = {});

/// Largest h1 distance from the span of the patch directions (through the
/// base) over local states within `radius` of the base.
double tangency_deviation(const FemSystem &norm, const ManifoldPatch &patch, double radius);

/// Initial data: combinations of the lowest (S, K+M) eigenvectors with
/// integer coefficients, scaled to h1 = radius, distinct directions only,
/// ordered by support size; at most `limit` states.
std::vector<Vector> initial_grid(const FemSystem &fem, int modes,
                                 const std::vector<int> &coefficients, double radius,
                                 std::size_t limit);

struct AttractorOptions {
  double t_transient = 10.0;
  double t_sample = 10.0;
  double spacing = 0.01;
};

/// Trajectory tails of every initial state plus the given equilibria and
/// manifold patches.
AttractorSample sample_attractor(const ImexStepper &stepper, const std::vector<Vector> &initial,
                                 const std::vector<EquilibriumPoint> &equilibria,
                                 const std::vector<ManifoldPatch> &patches,
                                 const AttractorOptions &opts = {});

/// sup over a in A of inf over b in B of h1(a - b). With use_links the
/// infimum also runs over the segments joining linked states of B.
/// Throws DomainError when the samples live on different meshes.
double hausdorff_semidist(const FemSystem &norm, const AttractorSample &a,
                          const AttractorSample &b, bool use_links = true);

struct SemicontinuityRow {
  double epsilon = 0.0;
  double upper = 0.0;                 // semidist(A_eps -> A_0)
  double lower = 0.0;                 // semidist(A_0 -> A_eps)
  std::vector<double> manifold;       // two-sided local patch distances
  double upper_points = 0.0;          // same without segments
  double lower_points = 0.0;
};

/// Rows per epsilon; `patches[k][i]` is the patch of equilibrium i in sample k.
std::vector<SemicontinuityRow>
semicontinuity_report(const FemSystem &norm, const std::vector<AttractorSample> &samples,
                      const AttractorSample &limit,
                      const std::vector<std::vector<ManifoldPatch>> &patches,
                      const std::vector<ManifoldPatch> &limit_patches);

void write_semicontinuity_csv(const std::string &path, const std::vector<SemicontinuityRow> &rows);

} // namespace oscistrip
