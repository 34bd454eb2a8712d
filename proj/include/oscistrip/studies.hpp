#pragma once

#include "oscistrip/attractors.hpp"
#include "oscistrip/config.hpp"
#include "oscistrip/equilibria.hpp"
#include "oscistrip/fem.hpp"
#include "oscistrip/operators.hpp"
#include "oscistrip/quadrature.hpp"
#include "oscistrip/semiflow.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace oscistrip {

/// c0 + sum_k a_k cos(p_k x + q_k y + phase_k).
struct TrigPolynomial {
  double c0 = 0.0;
  std::vector<std::array<double, 4>> terms; // a, p, q, phase

  double operator()(const Vec2 &x) const;
  ScalarField field() const;
  std::string describe() const;
};

TrigPolynomial random_trig_polynomial(std::mt19937_64 &rng, int terms = 3, int max_freq = 2);

/// Scenario calibration: lambda is the midpoint of the window in which
/// S_lambda - J(0) has exactly one negative eigenvalue on every rung and
/// at eps = 0, i.e. [max(0, max -nu_2), min -nu_1) for the two lowest
/// eigenvalues nu_1 <= nu_2 of (K + P - J(0), M).
struct LambdaCalibration {
  std::vector<double> epsilon;
  std::vector<double> nu1, nu2;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double lambda = 0.0;
  bool calibrated = true; // false when lambda was fixed in the config
};

/// Caches the mesh, the FEM systems per epsilon (0 = limit) and the
/// equilibrium sets shared by several studies.
class Laboratory {
public:
  explicit Laboratory(ExperimentConfig cfg, std::ostream *log = nullptr);

  const ExperimentConfig &config() const { return cfg_; }
  const BoundaryCurve &curve() const { return curve_; }
  const OscillationProfile &profile() const { return profile_; }
  StripRegion region(double eps) const;
  /// eps ladder followed by 0.
  std::vector<double> levels() const;

  QuadSpec conc_spec() const;
  QuadSpec fem_spec() const;

  std::shared_ptr<const Mesh> mesh();
  /// V = operator potential, lambda = operator lambda, f = 0.
  const FemSystem &operator_system(double eps);
  /// Bistable scenario at the calibrated (or configured) lambda.
  const FemSystem &scenario_system(double eps);
  const LambdaCalibration &calibration();
  /// All equilibria of the scenario at eps, classified.
  const std::vector<EquilibriumPoint> &equilibria(double eps, std::vector<std::string> *log = nullptr);

  double mu_at(double s) const;
  void note(const std::string &msg) const;

private:
  std::unique_ptr<FemSystem> build(double eps, const PotentialPreset &V, Nonlinearity f,
                                   double lambda);

  ExperimentConfig cfg_;
  std::ostream *log_;
  BoundaryCurve curve_;
  OscillationProfile profile_;
  std::shared_ptr<const Mesh> mesh_;
  std::map<double, std::unique_ptr<FemSystem>> operator_, scenario_base_, scenario_;
  std::unique_ptr<LambdaCalibration> calibration_;
  std::map<double, std::vector<EquilibriumPoint>> equilibria_;
};

/// Plain row results of the experiment families. Verdicts are formed from
/// these by `evaluate_*` in the harness and independently by the tests.

struct MuStudy {
  std::vector<double> s, numeric, exact;
  double max_error = 0.0;
};
MuStudy mu_study(Laboratory &lab);

struct ConcPair {
  std::string name;
  std::vector<ConvergenceRow> rows;
  double rate = 0.0;
};
struct ConcStudy {
  std::vector<ConcPair> pairs;         // unordered pairs from {1, x, xy}
  std::vector<double> constant_eps;    // g == 1, h = phi = 1
  std::vector<double> constant_value;
  std::vector<double> constant_closed; // 2 pi - pi eps on the unit circle
};
ConcStudy conc_study(Laboratory &lab);

struct OracleRow {
  std::string integrand;
  double quadrature = 0.0;
  MonteCarloEstimate mc;
};
struct OracleStudy {
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::vector<TrigPolynomial> h, phi;
  std::vector<OracleRow> rows;
};
OracleStudy oracle_study(Laboratory &lab);

struct CoercivityStudy {
  std::vector<double> epsilon, constant;
  std::vector<double> sign_changing; // V = value + amplitude cos s with min V < 0
};
CoercivityStudy coercivity_study(Laboratory &lab);

struct OperatorGapStudy {
  std::vector<double> epsilon, khat, potential_gap;
};
OperatorGapStudy operator_gap_study(Laboratory &lab);

struct NonlinearityStudy {
  std::vector<double> epsilon; // ladder then 0
  std::vector<ReactionBounds> bounds;
  std::vector<double> max_dual;  // max dual(F(u)) over random states
  std::vector<double> max_ratio; // max dual(F(u) - F(v)) / h1(u - v)
  double k_threshold = 0.0;
  double l_threshold = 0.0;
  std::vector<double> fd_steps;
  std::vector<std::vector<FrechetCheck>> frechet; // per level, per state
  std::vector<std::vector<double>> reaction_gap;  // per rung, per smooth u
};
NonlinearityStudy nonlinearity_study(Laboratory &lab);

struct SemigroupStudy {
  std::vector<double> epsilon;
  std::vector<GapSeries> series;
  std::vector<double> sup;
  double weight_b = 0.0;
  double power = 0.5;
};
SemigroupStudy linear_semigroup_study(Laboratory &lab);
SemigroupStudy nonlinear_semigroup_study(Laboratory &lab);

struct EquilibriaStudy {
  std::vector<double> epsilon;                       // ladder
  std::vector<std::vector<EquilibriumPoint>> points; // per rung, matched order
  std::vector<EquilibriumPoint> limit;
  std::vector<std::vector<double>> distance; // [rung][i] h1 distance to limit point i
  std::vector<std::string> log;
  std::vector<std::string> continuation; // per limit point: "ok" or the error
};
EquilibriaStudy equilibria_study(Laboratory &lab);

struct AttractorStudy {
  std::vector<double> epsilon; // ladder then 0
  std::vector<std::size_t> sample_size;
  std::vector<double> max_h1;
  std::vector<std::size_t> patch_points;
  std::vector<SemicontinuityRow> rows;
  int saddle = -1; // index (limit order) of the Morse-index-1 equilibrium
  std::vector<double> radii;
  std::vector<std::vector<double>> tangency; // per level, per radius
  std::vector<double> tangency_order;
  std::vector<int> exit_count;
};
AttractorStudy attractor_study(Laboratory &lab);

struct Check {
  std::string id;
  std::string description;
  bool acceptance = true;
  bool passed = false;
  std::string detail;
};

struct RunReport {
  std::string suite;
  std::string config_echo;
  std::vector<std::string> csv_paths;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, double>> timings; // seconds
  bool passed() const;
};

std::vector<Check> evaluate(const MuStudy &s);
std::vector<Check> evaluate(const ConcStudy &s);
std::vector<Check> evaluate(const OracleStudy &s);
std::vector<Check> evaluate(const CoercivityStudy &s);
std::vector<Check> evaluate(const OperatorGapStudy &s);
std::vector<Check> evaluate(const NonlinearityStudy &s);
std::vector<Check> evaluate_linear(const SemigroupStudy &s);
std::vector<Check> evaluate_nonlinear(const SemigroupStudy &s);
std::vector<Check> evaluate(const EquilibriaStudy &s, const ExperimentConfig &cfg);
std::vector<Check> evaluate(const AttractorStudy &s, const ExperimentConfig &cfg);

const std::vector<std::string> &suite_names();

/// Runs one experiment family (or "full"), writes CSVs, config.ini,
/// summary.txt and report.json under out_dir. Throws ConfigError for an
/// unknown suite name.
RunReport run_suite(const ExperimentConfig &cfg, const std::string &suite,
                    const std::string &out_dir, std::ostream *log = nullptr);

/// True when every step is strictly below the previous one.
bool strictly_decreasing(const std::vector<double> &v);
/// True when v[i+1] <= (1 + slack) v[i] for all i.
bool decreasing_with_slack(const std::vector<double> &v, double slack);

} // namespace oscistrip
