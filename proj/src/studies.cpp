#include "oscistrip/studies.hpp"

#include "oscistrip/errors.hpp"
#include "oscistrip/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace oscistrip {

double TrigPolynomial::operator()(const Vec2 &x) const {
  double v = c0;
  for (const auto &t : terms)
    v += t[0] * std::cos(t[1] * x.x() + t[2] * x.y() + t[3]);
  return v;
}

ScalarField TrigPolynomial::field() const {
  TrigPolynomial copy = *this;
  return ScalarField::from([copy](const Vec2 &p) { return copy(p); });
}

std::string TrigPolynomial::describe() const {
  std::ostringstream o;
  o << std::setprecision(4) << c0;
  for (const auto &t : terms)
    o << " + " << t[0] << "cos(" << t[1] << "x+" << t[2] << "y+" << t[3] << ")";
  return o.str();
}

TrigPolynomial random_trig_polynomial(std::mt19937_64 &rng, int terms, int max_freq) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> freq(-max_freq, max_freq);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  TrigPolynomial p;
  p.c0 = coef(rng);
  for (int k = 0; k < terms; ++k) {
    const double a = coef(rng);
    const double fx = freq(rng), fy = freq(rng);
    p.terms.push_back({a, fx, fy, phase(rng)});
  }
  return p;
}

// ---------------------------------------------------------------- laboratory

Laboratory::Laboratory(ExperimentConfig cfg, std::ostream *log)
    : cfg_(std::move(cfg)), log_(log), curve_(cfg_.make_curve()), profile_(cfg_.make_profile()) {
  cfg_.validate();
}

StripRegion Laboratory::region(double eps) const {
  return StripRegion(curve_, profile_, eps, cfg_.eps_clamp);
}

std::vector<double> Laboratory::levels() const {
  std::vector<double> v = cfg_.ladder;
  v.push_back(0.0);
  return v;
}

QuadSpec Laboratory::conc_spec() const {
  QuadSpec q;
  q.beta_points = cfg_.beta_points;
  q.s_points = cfg_.s_points;
  q.mc_samples = cfg_.mc_samples;
  return q;
}

QuadSpec Laboratory::fem_spec() const {
  QuadSpec q;
  q.beta_points = cfg_.fem_beta_points;
  q.s_points = cfg_.fem_s_points;
  q.max_cell = cfg_.h_boundary;
  return q;
}

double Laboratory::mu_at(double s) const {
  return profile_.exact_mean ? profile_.exact_mean(s) : mu(profile_, s);
}

void Laboratory::note(const std::string &msg) const {
  if (log_)
    *log_ << msg << std::endl;
}

std::shared_ptr<const Mesh> Laboratory::mesh() {
  if (!mesh_) {
    mesh_ = std::make_shared<Mesh>(generate_disk_mesh(cfg_.radius, cfg_.h_interior,
                                                      cfg_.h_boundary, cfg_.fine_depth));
    note("mesh: " + std::to_string(mesh_->num_vertices()) + " vertices, " +
         std::to_string(mesh_->triangles.size()) + " triangles");
  }
  return mesh_;
}

std::unique_ptr<FemSystem> Laboratory::build(double eps, const PotentialPreset &V, Nonlinearity f,
                                             double lambda) {
  if (eps == 0.0) {
    BoundaryWeight V0;
    if (!V.is_zero()) {
      const OscillationProfile prof = profile_;
      V0 = [prof, V](double s) {
        return (prof.exact_mean ? prof.exact_mean(s) : mu(prof, s)) * V(s);
      };
    }
    return std::make_unique<FemSystem>(FemSystem::limit(mesh(), profile_, V0, f, lambda));
  }
  StripPotential Vs;
  if (!V.is_zero())
    Vs = [V](const Vec2 &, double s) { return V(s); };
  return std::make_unique<FemSystem>(
      FemSystem::strip(mesh(), region(eps), Vs, f, lambda, fem_spec()));
}

const FemSystem &Laboratory::operator_system(double eps) {
  auto &slot = operator_[eps];
  if (!slot)
    slot = build(eps, cfg_.operator_potential, Nonlinearity::zero(), cfg_.operator_lambda);
  return *slot;
}

const LambdaCalibration &Laboratory::calibration() {
  if (calibration_)
    return *calibration_;
  auto cal = std::make_unique<LambdaCalibration>();
  const Nonlinearity f = cfg_.make_nonlinearity();
  for (double eps : levels()) {
    auto &base = scenario_base_[eps];
    if (!base)
      base = build(eps, cfg_.scenario_potential, f, 0.0);
    const Vector zero = Vector::Zero(static_cast<Eigen::Index>(base->size()));
    const SparseMatrix a = base->system() - base->apply_Fprime(zero);
    cal->epsilon.push_back(eps);
    cal->nu1.push_back(pencil_eigenvalue(a, base->mass(), 1));
    cal->nu2.push_back(pencil_eigenvalue(a, base->mass(), 2));
  }
  cal->window_lo = 0.0;
  cal->window_hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cal->epsilon.size(); ++i) {
    cal->window_lo = std::max(cal->window_lo, -cal->nu2[i]);
    cal->window_hi = std::min(cal->window_hi, -cal->nu1[i]);
  }
  if (cfg_.scenario_lambda) {
    cal->lambda = *cfg_.scenario_lambda;
    cal->calibrated = false;
  } else {
    if (!(cal->window_lo < cal->window_hi)) {
      std::ostringstream msg;
      msg << "scenario.lambda: no lambda gives exactly one unstable direction at u = 0 on every "
             "level (window ["
          << cal->window_lo << ", " << cal->window_hi << ") is empty)";
      throw ConfigError(msg.str());
    }
    cal->lambda = 0.5 * (cal->window_lo + cal->window_hi);
  }
  std::ostringstream msg;
  msg << "scenario lambda = " << cal->lambda << " (window [" << cal->window_lo << ", "
      << cal->window_hi << "))";
  note(msg.str());
  calibration_ = std::move(cal);
  return *calibration_;
}

const FemSystem &Laboratory::scenario_system(double eps) {
  auto &slot = scenario_[eps];
  if (!slot) {
    const double lambda = calibration().lambda;
    auto &base = scenario_base_[eps];
    if (!base)
      base = build(eps, cfg_.scenario_potential, cfg_.make_nonlinearity(), 0.0);
    slot = std::make_unique<FemSystem>(base->with_lambda(lambda));
  }
  return *slot;
}

const std::vector<EquilibriumPoint> &Laboratory::equilibria(double eps,
                                                            std::vector<std::string> *log) {
  auto it = equilibria_.find(eps);
  if (it != equilibria_.end())
    return it->second;
  SeedStrategy seeds;
  seeds.dedup = cfg_.dedup;
  NewtonOptions opts;
  opts.tol = cfg_.newton_tol;
  opts.gap_tol = cfg_.gap_tol;
  std::vector<std::string> local;
  auto found = find_all_equilibria(scenario_system(eps), seeds, opts, &local);
  for (auto &l : local) {
    std::ostringstream o;
    o << "eps " << eps << ": " << l;
    if (log)
      log->push_back(o.str());
  }
  std::ostringstream o;
  o << "eps " << eps << ": " << found.size() << " equilibria";
  note(o.str());
  return equilibria_.emplace(eps, std::move(found)).first->second;
}

// ------------------------------------------------------------------- studies

MuStudy mu_study(Laboratory &lab) {
  MuStudy out;
  const double T = lab.curve().period();
  const int n = 64;
  for (int i = 0; i < n; ++i) {
    const double s = T * i / n;
    const double num = mu(lab.profile(), s);
    const double ex = lab.profile().exact_mean ? lab.profile().exact_mean(s)
                                               : std::numeric_limits<double>::quiet_NaN();
    out.s.push_back(s);
    out.numeric.push_back(num);
    out.exact.push_back(ex);
    if (!std::isnan(ex))
      out.max_error = std::max(out.max_error, std::abs(num - ex));
  }
  return out;
}

ConcStudy conc_study(Laboratory &lab) {
  const std::vector<std::pair<std::string, ScalarField>> basis{
      {"1", ScalarField::constant(1.0)},
      {"x", ScalarField::from([](const Vec2 &p) { return p.x(); })},
      {"xy", ScalarField::from([](const Vec2 &p) { return p.x() * p.y(); })}};
  ConcStudy out;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j)
      pairs.emplace_back(i, j);
  out.pairs.resize(pairs.size());
  const QuadSpec spec = lab.conc_spec();
  const auto &ladder = lab.config().ladder;
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    ConcPair &p = out.pairs[k];
    p.name = basis[i].first + "*" + basis[j].first;
    p.rows = conc_convergence_table(lab.curve(), lab.profile(), ladder, basis[i].second,
                                    basis[j].second, spec);
    p.rate = fitted_rate(p.rows);
  });
  if (auto r = lab.curve().circle_radius()) {
    const OscillationProfile one = OscillationProfile::constant(1.0);
    for (double eps : ladder) {
      const StripRegion region(lab.curve(), one, eps, lab.config().eps_clamp);
      out.constant_eps.push_back(eps);
      out.constant_value.push_back(
          conc_integral(region, ScalarField::constant(1.0), ScalarField::constant(1.0), spec));
      out.constant_closed.push_back(std::numbers::pi * (2.0 * *r - eps));
    }
  }
  return out;
}

OracleStudy oracle_study(Laboratory &lab) {
  const auto &cfg = lab.config();
  OracleStudy out;
  out.epsilon = cfg.mc_epsilon;
  out.seed = cfg.seed;
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::pair<ScalarField, ScalarField>> integrands;
  for (int i = 0; i < cfg.mc_integrands; ++i) {
    out.h.push_back(random_trig_polynomial(rng));
    out.phi.push_back(random_trig_polynomial(rng));
    integrands.emplace_back(out.h.back().field(), out.phi.back().field());
  }
  const StripRegion region = lab.region(cfg.mc_epsilon);
  const auto mc = monte_carlo_conc_integrals(region, integrands, cfg.mc_samples, cfg.seed);
  out.rows.resize(integrands.size());
  parallel_for(integrands.size(), [&](std::size_t i) {
    out.rows[i].integrand = "(" + out.h[i].describe() + ") * (" + out.phi[i].describe() + ")";
    out.rows[i].quadrature =
        conc_integral(region, integrands[i].first, integrands[i].second, lab.conc_spec());
    out.rows[i].mc = mc[i];
  });
  return out;
}

CoercivityStudy coercivity_study(Laboratory &lab) {
  CoercivityStudy out;
  const auto &cfg = lab.config();
  PotentialPreset sign_changing{"cosine", 0.25, 1.0};
  for (double eps : lab.levels()) {
    out.epsilon.push_back(eps);
    out.constant.push_back(lab.operator_system(eps).coercivity_constant());
    // Built on demand and dropped: only the constant is reported.
    const FemSystem sys = eps == 0.0
        ? FemSystem::limit(lab.mesh(), lab.profile(),
                           [&](double s) { return lab.mu_at(s) * sign_changing(s); },
                           Nonlinearity::zero(), cfg.operator_lambda)
        : FemSystem::strip(lab.mesh(), lab.region(eps),
                           [&](const Vec2 &, double s) { return sign_changing(s); },
                           Nonlinearity::zero(), cfg.operator_lambda, lab.fem_spec());
    out.sign_changing.push_back(sys.coercivity_constant());
  }
  return out;
}

OperatorGapStudy operator_gap_study(Laboratory &lab) {
  OperatorGapStudy out;
  const FemSystem &limit = lab.operator_system(0.0);
  std::vector<Vector> fields;
  for (const auto &f : smooth_test_fields(20))
    fields.push_back(limit.interpolate(f));
  for (double eps : lab.config().ladder) {
    const FemSystem &sys = lab.operator_system(eps);
    out.epsilon.push_back(eps);
    out.khat.push_back(operator_gap_estimate(sys, limit, fields));
    out.potential_gap.push_back(potential_operator_gap(sys, limit));
  }
  return out;
}

namespace {

Vector scaled_to_sup(const Vector &u, double bound) {
  const double m = u.cwiseAbs().maxCoeff();
  return m > 0.0 ? Vector(u * (bound / m)) : u;
}

std::vector<ScalarField> reaction_gap_fields() {
  return {ScalarField::constant(0.5),
          ScalarField::from([](const Vec2 &p) { return 0.2 + 0.5 * p.x(); }),
          ScalarField::from([](const Vec2 &p) { return p.x() * p.y(); }),
          ScalarField::from([](const Vec2 &p) { return 0.8 * std::cos(p.x() + p.y()); }),
          ScalarField::from([](const Vec2 &p) { return 0.3 + 0.6 * std::sin(2.0 * p.y()); })};
}

} // namespace

NonlinearityStudy nonlinearity_study(Laboratory &lab) {
  const auto &cfg = lab.config();
  NonlinearityStudy out;
  out.fd_steps = {1e-1, 5e-2, 2.5e-2, 1.25e-2, 6.25e-3};
  const FemSystem &limit = lab.scenario_system(0.0);
  const auto n = static_cast<Eigen::Index>(limit.size());

  std::mt19937_64 rng(cfg.seed + 1);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> amp(0.5, 3.0);
  std::vector<Vector> states;
  for (int i = 0; i < 10; ++i) {
    Vector u(n);
    for (Eigen::Index k = 0; k < n; ++k)
      u[k] = 3.0 * unit(rng);
    states.push_back(u);
  }
  for (int i = 0; i < 10; ++i)
    states.push_back(
        scaled_to_sup(limit.interpolate(random_trig_polynomial(rng).field()), amp(rng)));

  std::vector<Vector> fd_states, fd_dirs;
  std::uniform_real_distribution<double> level(0.3, 1.0);
  for (int i = 0; i < 5; ++i) {
    fd_states.push_back(
        scaled_to_sup(limit.interpolate(random_trig_polynomial(rng).field()), 1.5 * level(rng)));
    Vector w = limit.interpolate(random_trig_polynomial(rng).field());
    fd_dirs.push_back(w / limit.h1(w));
  }
  std::vector<Vector> smooth;
  for (const auto &f : reaction_gap_fields())
    smooth.push_back(limit.interpolate(f));
  std::vector<Vector> f0;
  for (const auto &u : smooth)
    f0.push_back(limit.apply_F(u));

  for (double eps : lab.levels()) {
    const FemSystem &sys = lab.scenario_system(eps);
    out.epsilon.push_back(eps);
    out.bounds.push_back(reaction_bounds(sys));
    std::vector<double> duals(states.size()), ratios(states.size());
    std::vector<Vector> F(states.size());
    parallel_for(states.size(), [&](std::size_t i) {
      F[i] = sys.apply_F(states[i]);
      duals[i] = sys.dual(F[i]);
    });
    parallel_for(states.size(), [&](std::size_t i) {
      const std::size_t j = (i + 1) % states.size();
      ratios[i] = sys.dual(F[i] - F[j]) / sys.h1(states[i] - states[j]);
    });
    out.max_dual.push_back(*std::max_element(duals.begin(), duals.end()));
    out.max_ratio.push_back(*std::max_element(ratios.begin(), ratios.end()));

    std::vector<FrechetCheck> checks(fd_states.size());
    parallel_for(fd_states.size(), [&](std::size_t i) {
      checks[i] = frechet_check(sys, fd_states[i], fd_dirs[i], out.fd_steps);
    });
    out.frechet.push_back(std::move(checks));

    if (eps > 0.0) {
      std::vector<double> gaps;
      for (std::size_t i = 0; i < smooth.size(); ++i)
        gaps.push_back(limit.dual(sys.apply_F(smooth[i]) - f0[i]));
      out.reaction_gap.push_back(std::move(gaps));
    }
  }
  for (const auto &b : out.bounds) {
    out.k_threshold = std::max(out.k_threshold, b.bound_k);
    out.l_threshold = std::max(out.l_threshold, b.lipschitz_l);
  }
  return out;
}

namespace {

double linear_initial(const Vec2 &p) { return 1.0 + p.x() - 0.5 * p.y() + p.x() * p.y(); }
double nonlinear_initial(const Vec2 &p) {
  return 0.5 + 0.4 * p.x() - 0.3 * p.y() * p.y() + 0.2 * std::sin(3.0 * p.y());
}

} // namespace

SemigroupStudy linear_semigroup_study(Laboratory &lab) {
  const auto &cfg = lab.config();
  SemigroupStudy out;
  out.power = 0.5;
  double c = std::numeric_limits<double>::infinity();
  for (double eps : lab.levels())
    c = std::min(c, lab.operator_system(eps).coercivity_constant());
  out.weight_b = 0.9 * c;
  const FemSystem &limit = lab.operator_system(0.0);
  const Vector phi = limit.interpolate(ScalarField::from(linear_initial));
  for (double eps : cfg.ladder) {
    out.epsilon.push_back(eps);
    out.series.push_back(linear_semigroup_gap(lab.operator_system(eps), limit, phi, cfg.t_linear,
                                              cfg.dt, out.power, out.weight_b));
    out.sup.push_back(out.series.back().sup);
  }
  return out;
}

SemigroupStudy nonlinear_semigroup_study(Laboratory &lab) {
  const auto &cfg = lab.config();
  SemigroupStudy out;
  out.power = 0.5;
  const FemSystem &limit = lab.scenario_system(0.0);
  const Vector phi = limit.interpolate(ScalarField::from(nonlinear_initial));
  for (double eps : cfg.ladder) {
    out.epsilon.push_back(eps);
    out.series.push_back(nonlinear_semigroup_gap(lab.scenario_system(eps), limit, phi, phi,
                                                 cfg.tau, cfg.dt, out.power));
    out.sup.push_back(out.series.back().sup);
  }
  return out;
}

EquilibriaStudy equilibria_study(Laboratory &lab) {
  const auto &cfg = lab.config();
  EquilibriaStudy out;
  out.limit = lab.equilibria(0.0, &out.log);
  const FemSystem &norm = lab.scenario_system(0.0);
  for (double eps : cfg.ladder) {
    const auto &pts = lab.equilibria(eps, &out.log);
    out.epsilon.push_back(eps);
    if (pts.size() != out.limit.size()) {
      std::ostringstream o;
      o << "eps " << eps << ": " << pts.size() << " equilibria, limit has " << out.limit.size();
      out.log.push_back(o.str());
      out.points.push_back(pts);
      out.distance.emplace_back(out.limit.size(), std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const Matching m = match_equilibria(norm, pts, out.limit);
    std::vector<EquilibriumPoint> ordered(pts.size());
    std::vector<double> dist(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) {
      ordered[static_cast<std::size_t>(m.partner[j])] = pts[j];
      dist[static_cast<std::size_t>(m.partner[j])] = m.distance[j];
    }
    out.points.push_back(std::move(ordered));
    out.distance.push_back(std::move(dist));
  }

  NewtonOptions opts;
  opts.tol = cfg.newton_tol;
  opts.gap_tol = cfg.gap_tol;
  opts.classify = false;
  auto system_for = [&lab](double e) -> const FemSystem & { return lab.scenario_system(e); };
  for (const auto &base : out.limit) {
    try {
      continue_branch(system_for, cfg.ladder, base, cfg.branch_delta, opts);
      out.continuation.push_back("ok");
    } catch (const NumericalError &e) {
      out.continuation.push_back(e.what());
    }
  }
  return out;
}

AttractorStudy attractor_study(Laboratory &lab) {
  const auto &cfg = lab.config();
  AttractorStudy out;
  const FemSystem &norm = lab.scenario_system(0.0);
  const auto &limit_eq = lab.equilibria(0.0);
  for (std::size_t i = 0; i < limit_eq.size(); ++i)
    if (limit_eq[i].morse_index == 1 && out.saddle < 0)
      out.saddle = static_cast<int>(i);
  for (int k = 0; k < 4; ++k)
    out.radii.push_back(cfg.delta / std::pow(2.0, k));

  const std::vector<Vector> initial =
      initial_grid(norm, cfg.modes, cfg.coefficients, cfg.initial_radius,
                   static_cast<std::size_t>(cfg.max_initial));
  ManifoldOptions mopts;
  mopts.delta = cfg.delta;
  mopts.t_grow = cfg.t_grow;
  mopts.seed_fraction = cfg.seed_fraction;
  mopts.spacing = cfg.manifold_spacing;
  AttractorOptions aopts;
  aopts.t_transient = cfg.t_transient;
  aopts.t_sample = cfg.t_sample;
  aopts.spacing = cfg.spacing;

  std::vector<AttractorSample> samples;
  std::vector<std::vector<ManifoldPatch>> patches;
  AttractorSample limit_sample;
  std::vector<ManifoldPatch> limit_patches;
  for (double eps : lab.levels()) {
    const FemSystem &sys = lab.scenario_system(eps);
    const ImexStepper stepper(sys, cfg.attractor_dt);
    std::vector<EquilibriumPoint> eqs = lab.equilibria(eps);
    if (eps > 0.0 && eqs.size() == limit_eq.size()) {
      const Matching m = match_equilibria(norm, eqs, limit_eq);
      std::vector<EquilibriumPoint> ordered(eqs.size());
      for (std::size_t j = 0; j < eqs.size(); ++j)
        ordered[static_cast<std::size_t>(m.partner[j])] = eqs[j];
      eqs = std::move(ordered);
    }
    std::vector<ManifoldPatch> ps;
    for (const auto &e : eqs)
      ps.push_back(unstable_manifold_patch(stepper, e, mopts));
    AttractorSample sample = sample_attractor(stepper, initial, eqs, ps, aopts);

    out.epsilon.push_back(eps);
    out.sample_size.push_back(sample.size());
    out.max_h1.push_back(sample.max_h1(norm));
    std::size_t pts = 0;
    int exits = 0;
    for (const auto &p : ps) {
      pts += p.local.size();
      exits += p.exit_count;
    }
    out.patch_points.push_back(pts);
    out.exit_count.push_back(exits);
    std::vector<double> dev;
    if (out.saddle >= 0 && static_cast<std::size_t>(out.saddle) < ps.size())
      for (double r : out.radii)
        dev.push_back(tangency_deviation(norm, ps[static_cast<std::size_t>(out.saddle)], r));
    out.tangency_order.push_back(dev.empty() ? std::numeric_limits<double>::quiet_NaN()
                                             : loglog_slope(out.radii, dev));
    out.tangency.push_back(std::move(dev));
    std::ostringstream o;
    o << "eps " << eps << ": attractor sample " << sample.size() << " states";
    lab.note(o.str());

    if (eps > 0.0) {
      samples.push_back(std::move(sample));
      patches.push_back(std::move(ps));
    } else {
      limit_sample = std::move(sample);
      limit_patches = std::move(ps);
    }
  }
  bool same_counts = true;
  for (const auto &p : patches)
    same_counts = same_counts && p.size() == limit_patches.size();
  out.rows = semicontinuity_report(norm, samples, limit_sample,
                                   same_counts ? patches : std::vector<std::vector<ManifoldPatch>>{},
                                   limit_patches);
  return out;
}

// ------------------------------------------------------------------ verdicts

bool strictly_decreasing(const std::vector<double> &v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1]))
      return false;
  return !v.empty();
}

bool decreasing_with_slack(const std::vector<double> &v, double slack) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] <= (1.0 + slack) * v[i - 1]))
      return false;
  return !v.empty();
}

bool RunReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check &c) { return !c.acceptance || c.passed; });
}

namespace {

std::string fmt(double v) {
  std::ostringstream o;
  o << std::setprecision(6) << v;
  return o.str();
}

std::string fmt_list(const std::vector<double> &v) {
  std::string s;
  for (double x : v)
    s += (s.empty() ? "" : " ") + fmt(x);
  return s;
}

// Errors at roundoff on every rung: the pair integrates to its limit exactly.
bool exact_pair(const ConcPair &p) {
  return std::all_of(p.rows.begin(), p.rows.end(), [](const ConvergenceRow &r) {
    return r.abs_error <= 1e-12 * std::max(1.0, std::abs(r.limit));
  });
}

} // namespace

std::vector<Check> evaluate(const MuStudy &s) {
  const bool has_exact = std::any_of(s.exact.begin(), s.exact.end(),
                                     [](double e) { return !std::isnan(e); });
  Check c{"mu", "mean profile matches its closed form within 1e-10", true,
          has_exact && s.max_error <= 1e-10, "max error " + fmt(s.max_error)};
  if (!has_exact) {
    c.acceptance = false;
    c.passed = true;
    c.detail = "profile has no closed-form mean";
  }
  return {c};
}

std::vector<Check> evaluate(const ConcStudy &s) {
  std::vector<Check> out;
  bool mono = true, rate = true;
  std::string detail;
  for (const auto &p : s.pairs) {
    if (exact_pair(p)) {
      detail += p.name + ": exact; ";
      continue;
    }
    std::vector<double> err;
    for (const auto &r : p.rows)
      err.push_back(r.abs_error);
    mono = mono && strictly_decreasing(err);
    rate = rate && p.rate >= 0.9;
    detail += p.name + ": rate " + fmt(p.rate) + "; ";
  }
  out.push_back({"conc-monotone", "concentrating-integral errors decrease along the ladder", true,
                 mono, detail});
  out.push_back({"conc-rate", "fitted convergence rate >= 0.9 for every pair", true, rate, detail});
  if (!s.constant_eps.empty()) {
    double worst = 0.0;
    for (std::size_t i = 0; i < s.constant_eps.size(); ++i)
      worst = std::max(worst, std::abs(s.constant_value[i] - s.constant_closed[i]));
    out.push_back({"conc-closed-form", "g == 1 strip integral matches pi (2R - eps) to 1e-8", true,
                   worst <= 1e-8, "max error " + fmt(worst)});
  }
  return out;
}

std::vector<Check> evaluate(const OracleStudy &s) {
  double worst = 0.0;
  for (const auto &r : s.rows)
    worst = std::max(worst, std::abs(r.quadrature - r.mc.value) / r.mc.std_error);
  return {{"quadrature-oracle", "quadrature agrees with Monte Carlo within 3 standard errors",
           true, !s.rows.empty() && worst <= 3.0, "max |z| " + fmt(worst)}};
}

std::vector<Check> evaluate(const CoercivityStudy &s) {
  const double lo = *std::min_element(s.constant.begin(), s.constant.end());
  return {{"coercivity", "pencil minimum eigenvalue >= 1 - 1e-6 at every level", true,
           lo >= 1.0 - 1e-6, "constants " + fmt_list(s.constant)}};
}

std::vector<Check> evaluate(const OperatorGapStudy &s) {
  return {{"operator-gap-monotone", "K-hat decreases along the ladder", true,
           strictly_decreasing(s.khat), "K-hat " + fmt_list(s.khat)},
          {"operator-gap-halves", "K-hat(last) <= 0.5 K-hat(first)", true,
           !s.khat.empty() && s.khat.back() <= 0.5 * s.khat.front(),
           "ratio " + fmt(s.khat.back() / s.khat.front())},
          {"potential-gap-monotone", "norm of P_eps - P_0 decreases along the ladder", false,
           strictly_decreasing(s.potential_gap), fmt_list(s.potential_gap)}};
}

std::vector<Check> evaluate(const NonlinearityStudy &s) {
  std::vector<Check> out;
  bool bound = true, lip = true;
  for (std::size_t i = 0; i < s.epsilon.size(); ++i) {
    bound = bound && s.max_dual[i] <= s.k_threshold;
    lip = lip && s.max_ratio[i] <= s.l_threshold;
  }
  out.push_back({"reaction-bound", "dual(F(u)) <= k at every level (single k)", true, bound,
                 "k = " + fmt(s.k_threshold) + ", measured " + fmt_list(s.max_dual)});
  out.push_back({"reaction-lipschitz", "Lipschitz ratio <= L at every level (single L)", true, lip,
                 "L = " + fmt(s.l_threshold) + ", measured " + fmt_list(s.max_ratio)});
  double worst = std::numeric_limits<double>::infinity();
  for (const auto &level : s.frechet)
    for (const auto &c : level)
      worst = std::min(worst, c.order);
  out.push_back({"frechet-order", "finite-difference Jacobian check order >= 0.9", true,
                 worst >= 0.9, "smallest order " + fmt(worst)});
  bool dec = !s.reaction_gap.empty();
  std::string detail;
  for (std::size_t j = 0; dec && j < s.reaction_gap.front().size(); ++j) {
    std::vector<double> col;
    for (const auto &row : s.reaction_gap)
      col.push_back(row[j]);
    dec = dec && strictly_decreasing(col);
    detail += "[" + fmt_list(col) + "] ";
  }
  out.push_back({"reaction-gap", "dual(F_eps(u) - F_0(u)) decreases along the ladder", true, dec,
                 detail});
  return out;
}

std::vector<Check> evaluate_linear(const SemigroupStudy &s) {
  return {{"linear-semigroup-monotone", "weighted sup gap decreases along the ladder", true,
           strictly_decreasing(s.sup), fmt_list(s.sup)},
          {"linear-semigroup-halves", "final weighted sup <= 0.5 initial", true,
           !s.sup.empty() && s.sup.back() <= 0.5 * s.sup.front(),
           "ratio " + fmt(s.sup.back() / s.sup.front())}};
}

std::vector<Check> evaluate_nonlinear(const SemigroupStudy &s) {
  return {{"nonlinear-semigroup-monotone", "weighted sup gap decreases along the ladder", true,
           strictly_decreasing(s.sup), fmt_list(s.sup)}};
}

std::vector<Check> evaluate(const EquilibriaStudy &s, const ExperimentConfig &cfg) {
  std::vector<Check> out;
  const std::size_t m = s.limit.size();
  bool counts = m > 0;
  for (const auto &p : s.points)
    counts = counts && p.size() == m;
  out.push_back({"equilibria-count", "same number of equilibria at every level", true, counts,
                 "m = " + std::to_string(m)});
  bool dec = counts, third = counts, morse = counts, gap = true;
  std::string detail;
  for (std::size_t i = 0; counts && i < m; ++i) {
    std::vector<double> d;
    for (const auto &row : s.distance)
      d.push_back(row[i]);
    const bool zero = std::all_of(d.begin(), d.end(), [](double x) { return x <= 1e-10; });
    if (!zero) {
      dec = dec && strictly_decreasing(d);
      third = third && d.back() <= d.front() / 3.0;
    }
    detail += "[" + fmt_list(d) + "] ";
    for (const auto &row : s.points)
      morse = morse && row[i].morse_index == s.limit[i].morse_index;
  }
  double min_gap = std::numeric_limits<double>::infinity();
  for (const auto &e : s.limit)
    min_gap = std::min(min_gap, e.min_abs_eig);
  for (const auto &row : s.points)
    for (const auto &e : row)
      min_gap = std::min(min_gap, e.min_abs_eig);
  gap = min_gap >= 0.5 * cfg.gap_tol;
  out.push_back({"equilibria-distance-monotone", "matching distances decrease along the ladder",
                 true, dec, detail});
  out.push_back({"equilibria-distance-third", "final matching distance <= first / 3", true, third,
                 detail});
  out.push_back({"equilibria-morse", "Morse index constant along every branch", true, morse, ""});
  out.push_back({"equilibria-hyperbolic", "hyperbolicity gap >= gap_tol / 2", true, gap,
                 "smallest |eig| " + fmt(min_gap)});
  bool cont = !s.continuation.empty();
  std::string why;
  for (const auto &c : s.continuation) {
    cont = cont && c == "ok";
    if (c != "ok")
      why += c + "; ";
  }
  out.push_back({"branch-continuation", "every limit equilibrium continues along the ladder",
                 false, cont, why});
  return out;
}

std::vector<Check> evaluate(const AttractorStudy &s, const ExperimentConfig &cfg) {
  std::vector<Check> out;
  std::vector<double> up, low, man;
  for (const auto &r : s.rows) {
    up.push_back(r.upper);
    low.push_back(r.lower);
    if (s.saddle >= 0 && static_cast<std::size_t>(s.saddle) < r.manifold.size())
      man.push_back(r.manifold[static_cast<std::size_t>(s.saddle)]);
  }
  out.push_back({"attractor-upper", "upper semidistance decreases (10% slack), final <= first/3",
                 true,
                 decreasing_with_slack(up, 0.1) && up.back() <= up.front() / 3.0, fmt_list(up)});
  out.push_back({"attractor-lower", "lower semidistance decreases (10% slack), final <= first/3",
                 true,
                 decreasing_with_slack(low, 0.1) && low.back() <= low.front() / 3.0,
                 fmt_list(low)});
  const double biggest = *std::max_element(s.max_h1.begin(), s.max_h1.end());
  out.push_back({"absorbing-ball", "every sampled state lies in the absorbing ball", true,
                 biggest <= cfg.absorbing_radius,
                 "max h1 " + fmt(biggest) + " vs " + fmt(cfg.absorbing_radius)});
  out.push_back({"manifold-distance", "saddle patch distance decreases along the ladder", true,
                 man.size() == s.rows.size() && strictly_decreasing(man), fmt_list(man)});
  double worst = std::numeric_limits<double>::infinity();
  for (double o : s.tangency_order)
    worst = std::isnan(o) ? -std::numeric_limits<double>::infinity() : std::min(worst, o);
  out.push_back({"manifold-tangency", "tangency deviation order >= 1.5 under delta-halving", true,
                 s.saddle >= 0 && worst >= 1.5, "orders " + fmt_list(s.tangency_order)});
  return out;
}

} // namespace oscistrip
