#include "oscistrip/config.hpp"

#include "oscistrip/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace oscistrip {

double PotentialPreset::operator()(double s) const {
  if (name == "zero")
    return 0.0;
  if (name == "constant")
    return value;
  return value + amplitude * std::cos(s);
}

double PotentialPreset::min_value() const {
  if (name == "zero")
    return 0.0;
  if (name == "constant")
    return value;
  return value - std::abs(amplitude);
}

BoundaryCurve ExperimentConfig::make_curve() const {
  if (curve == "circle")
    return BoundaryCurve::circle(radius);
  return BoundaryCurve::ellipse(ellipse_a, ellipse_b);
}

OscillationProfile ExperimentConfig::make_profile() const {
  if (profile == "two-plus-cos")
    return OscillationProfile::two_plus_cos();
  if (profile == "constant")
    return OscillationProfile::constant(profile_a);
  if (profile == "modulated")
    return OscillationProfile::modulated(profile_a, profile_b, profile_c);
  return OscillationProfile::variable_period(profile_a, profile_c, profile_m);
}

Nonlinearity ExperimentConfig::make_nonlinearity() const {
  if (nonlinearity == "bistable")
    return Nonlinearity::bistable(f_a, f_b);
  if (nonlinearity == "linear")
    return Nonlinearity::linear(f_a);
  if (nonlinearity == "constant")
    return Nonlinearity::constant(f_a);
  return Nonlinearity::zero();
}

namespace {

[[noreturn]] void bad(const std::string &field, const std::string &why) {
  throw ConfigError(field + ": " + why);
}

void positive(const std::string &field, double v) {
  if (!(v > 0.0) || !std::isfinite(v))
    bad(field, "must be positive");
}

double to_double(const std::string &field, const std::string &text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size())
      throw std::invalid_argument(text);
    return v;
  } catch (const std::exception &) {
    bad(field, "expected a number, got '" + text + "'");
  }
}

long long to_int(const std::string &field, const std::string &text) {
  const double v = to_double(field, text);
  if (v != std::floor(v))
    bad(field, "expected an integer, got '" + text + "'");
  return static_cast<long long>(v);
}

std::vector<std::string> split_list(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty())
      out.push_back(item);
  }
  return out;
}

void one_of(const std::string &field, const std::string &v,
            std::initializer_list<const char *> allowed) {
  for (const char *a : allowed)
    if (v == a)
      return;
  std::string list;
  for (const char *a : allowed)
    list += std::string(list.empty() ? "" : ", ") + a;
  bad(field, "unknown preset '" + v + "' (expected one of " + list + ")");
}

using Setter = std::function<void(ExperimentConfig &, const std::string &, const std::string &)>;

std::map<std::string, Setter> setters() {
  std::map<std::string, Setter> m;
  auto num = [&m](const std::string &key, double ExperimentConfig::*field) {
    m[key] = [field](ExperimentConfig &c, const std::string &k, const std::string &v) {
      c.*field = to_double(k, v);
    };
  };
  auto integer = [&m](const std::string &key, int ExperimentConfig::*field) {
    m[key] = [field](ExperimentConfig &c, const std::string &k, const std::string &v) {
      c.*field = static_cast<int>(to_int(k, v));
    };
  };
  auto text = [&m](const std::string &key, std::string ExperimentConfig::*field) {
    m[key] = [field](ExperimentConfig &c, const std::string &, const std::string &v) {
      c.*field = v;
    };
  };
  auto potential = [&m](const std::string &section, PotentialPreset ExperimentConfig::*field) {
    m[section + ".potential"] = [field](ExperimentConfig &c, const std::string &,
                                        const std::string &v) { (c.*field).name = v; };
    m[section + ".potential_value"] = [field](ExperimentConfig &c, const std::string &k,
                                              const std::string &v) {
      (c.*field).value = to_double(k, v);
    };
    m[section + ".potential_amplitude"] = [field](ExperimentConfig &c, const std::string &k,
                                                  const std::string &v) {
      (c.*field).amplitude = to_double(k, v);
    };
  };

  text("geometry.curve", &ExperimentConfig::curve);
  num("geometry.radius", &ExperimentConfig::radius);
  num("geometry.ellipse_a", &ExperimentConfig::ellipse_a);
  num("geometry.ellipse_b", &ExperimentConfig::ellipse_b);
  text("geometry.profile", &ExperimentConfig::profile);
  num("geometry.profile_a", &ExperimentConfig::profile_a);
  num("geometry.profile_b", &ExperimentConfig::profile_b);
  num("geometry.profile_c", &ExperimentConfig::profile_c);
  num("geometry.profile_m", &ExperimentConfig::profile_m);
  num("geometry.eps_clamp", &ExperimentConfig::eps_clamp);

  m["ladder.epsilons"] = [](ExperimentConfig &c, const std::string &k, const std::string &v) {
    c.ladder.clear();
    for (const auto &item : split_list(v))
      c.ladder.push_back(to_double(k, item));
  };

  num("mesh.h_interior", &ExperimentConfig::h_interior);
  num("mesh.h_boundary", &ExperimentConfig::h_boundary);
  num("mesh.fine_depth", &ExperimentConfig::fine_depth);

  integer("quadrature.beta_points", &ExperimentConfig::beta_points);
  integer("quadrature.s_points", &ExperimentConfig::s_points);
  integer("quadrature.fem_beta_points", &ExperimentConfig::fem_beta_points);
  integer("quadrature.fem_s_points", &ExperimentConfig::fem_s_points);
  m["quadrature.mc_samples"] = [](ExperimentConfig &c, const std::string &k, const std::string &v) {
    const long long n = to_int(k, v);
    if (n < 2)
      bad(k, "must be at least 2");
    c.mc_samples = static_cast<std::size_t>(n);
  };
  num("quadrature.mc_epsilon", &ExperimentConfig::mc_epsilon);
  integer("quadrature.mc_integrands", &ExperimentConfig::mc_integrands);

  potential("operators", &ExperimentConfig::operator_potential);
  num("operators.lambda", &ExperimentConfig::operator_lambda);

  text("scenario.nonlinearity", &ExperimentConfig::nonlinearity);
  num("scenario.f_a", &ExperimentConfig::f_a);
  num("scenario.f_b", &ExperimentConfig::f_b);
  num("scenario.dissipation_threshold", &ExperimentConfig::dissipation_threshold);
  potential("scenario", &ExperimentConfig::scenario_potential);
  m["scenario.lambda"] = [](ExperimentConfig &c, const std::string &k, const std::string &v) {
    if (v == "calibrate")
      c.scenario_lambda.reset();
    else
      c.scenario_lambda = to_double(k, v);
  };

  num("time.dt", &ExperimentConfig::dt);
  num("time.t_linear", &ExperimentConfig::t_linear);
  num("time.tau", &ExperimentConfig::tau);
  num("time.attractor_dt", &ExperimentConfig::attractor_dt);
  num("time.t_transient", &ExperimentConfig::t_transient);
  num("time.t_sample", &ExperimentConfig::t_sample);

  num("tolerances.newton_tol", &ExperimentConfig::newton_tol);
  num("tolerances.gap_tol", &ExperimentConfig::gap_tol);
  num("tolerances.delta", &ExperimentConfig::delta);
  num("tolerances.branch_delta", &ExperimentConfig::branch_delta);
  num("tolerances.dedup", &ExperimentConfig::dedup);

  integer("attractors.modes", &ExperimentConfig::modes);
  m["attractors.coefficients"] = [](ExperimentConfig &c, const std::string &k,
                                    const std::string &v) {
    c.coefficients.clear();
    for (const auto &item : split_list(v))
      c.coefficients.push_back(static_cast<int>(to_int(k, item)));
  };
  num("attractors.initial_radius", &ExperimentConfig::initial_radius);
  integer("attractors.max_initial", &ExperimentConfig::max_initial);
  num("attractors.spacing", &ExperimentConfig::spacing);
  num("attractors.manifold_spacing", &ExperimentConfig::manifold_spacing);
  num("attractors.t_grow", &ExperimentConfig::t_grow);
  num("attractors.seed_fraction", &ExperimentConfig::seed_fraction);
  num("attractors.absorbing_radius", &ExperimentConfig::absorbing_radius);

  m["run.seed"] = [](ExperimentConfig &c, const std::string &k, const std::string &v) {
    try {
      std::size_t used = 0;
      c.seed = std::stoull(v, &used);
      if (used != v.size())
        throw std::invalid_argument(v);
    } catch (const std::exception &) {
      bad(k, "expected an unsigned integer, got '" + v + "'");
    }
  };
  text("run.out", &ExperimentConfig::out);
  return m;
}

void check_potential(const std::string &section, const PotentialPreset &p) {
  one_of(section + ".potential", p.name, {"zero", "constant", "cosine"});
}

} // namespace

void ExperimentConfig::validate() const {
  one_of("geometry.curve", curve, {"circle", "ellipse"});
  one_of("geometry.profile", profile, {"two-plus-cos", "constant", "modulated", "variable-period"});
  positive("geometry.radius", radius);
  if (curve == "ellipse") {
    positive("geometry.ellipse_a", ellipse_a);
    positive("geometry.ellipse_b", ellipse_b);
  }
  positive("geometry.eps_clamp", eps_clamp);

  if (ladder.empty())
    bad("ladder.epsilons", "must list at least one epsilon");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    positive("ladder.epsilons", ladder[i]);
    if (i > 0 && !(ladder[i] < ladder[i - 1]))
      bad("ladder.epsilons", "epsilon ladder must descend");
  }
  const BoundaryCurve c = make_curve();
  OscillationProfile prof;
  try {
    prof = make_profile();
    prof.validate(c.period());
  } catch (const ConfigError &e) {
    bad("geometry.profile", e.what());
  }
  const double eps0 = StripRegion::compute_eps0(c, prof, eps_clamp);
  if (ladder.front() > eps0) {
    std::ostringstream msg;
    msg << "largest epsilon " << ladder.front() << " exceeds eps0 = " << eps0;
    bad("ladder.epsilons", msg.str());
  }

  positive("mesh.h_interior", h_interior);
  positive("mesh.h_boundary", h_boundary);
  if (h_boundary > h_interior)
    bad("mesh.h_boundary", "must not exceed mesh.h_interior");
  if (fine_depth < 0.0)
    bad("mesh.fine_depth", "must be non-negative");
  if (h_boundary > ladder.back() / 4.0 * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "strip resolution: h_boundary = " << h_boundary
        << " exceeds min(epsilon)/4 = " << ladder.back() / 4.0;
    bad("mesh.h_boundary", msg.str());
  }
  if (curve != "circle")
    bad("geometry.curve", "FEM studies need the circle (meshes are disks)");

  if (beta_points < 2)
    bad("quadrature.beta_points", "must be at least 2");
  if (s_points < 2)
    bad("quadrature.s_points", "must be at least 2");
  if (fem_beta_points < 2)
    bad("quadrature.fem_beta_points", "must be at least 2");
  if (fem_s_points < 2)
    bad("quadrature.fem_s_points", "must be at least 2");
  positive("quadrature.mc_epsilon", mc_epsilon);
  if (mc_epsilon > eps0)
    bad("quadrature.mc_epsilon", "exceeds eps0");
  if (mc_integrands < 1)
    bad("quadrature.mc_integrands", "must be at least 1");

  check_potential("operators", operator_potential);
  check_potential("scenario", scenario_potential);
  positive("operators.lambda", operator_lambda);
  one_of("scenario.nonlinearity", nonlinearity, {"bistable", "linear", "constant", "zero"});
  positive("scenario.dissipation_threshold", dissipation_threshold);
  if (scenario_lambda && !std::isfinite(*scenario_lambda))
    bad("scenario.lambda", "must be finite or 'calibrate'");

  positive("time.dt", dt);
  positive("time.t_linear", t_linear);
  positive("time.tau", tau);
  positive("time.attractor_dt", attractor_dt);
  positive("time.t_transient", t_transient);
  positive("time.t_sample", t_sample);

  positive("tolerances.newton_tol", newton_tol);
  positive("tolerances.gap_tol", gap_tol);
  positive("tolerances.delta", delta);
  positive("tolerances.branch_delta", branch_delta);
  positive("tolerances.dedup", dedup);

  if (modes < 1)
    bad("attractors.modes", "must be at least 1");
  if (coefficients.empty())
    bad("attractors.coefficients", "must not be empty");
  positive("attractors.initial_radius", initial_radius);
  if (max_initial < 0)
    bad("attractors.max_initial", "must be non-negative");
  positive("attractors.spacing", spacing);
  positive("attractors.manifold_spacing", manifold_spacing);
  positive("attractors.t_grow", t_grow);
  positive("attractors.seed_fraction", seed_fraction);
  if (seed_fraction >= 1.0)
    bad("attractors.seed_fraction", "must be below 1");
  positive("attractors.absorbing_radius", absorbing_radius);
}

std::string ExperimentConfig::echo() const {
  std::ostringstream o;
  o.precision(17);
  auto list = [](const auto &v) {
    std::ostringstream s;
    s.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i)
      s << (i ? ", " : "") << v[i];
    return s.str();
  };
  o << "[geometry]\ncurve = " << curve << "\nradius = " << radius << "\nellipse_a = " << ellipse_a
    << "\nellipse_b = " << ellipse_b << "\nprofile = " << profile << "\nprofile_a = " << profile_a
    << "\nprofile_b = " << profile_b << "\nprofile_c = " << profile_c
    << "\nprofile_m = " << profile_m << "\neps_clamp = " << eps_clamp << "\n\n";
  o << "[ladder]\nepsilons = " << list(ladder) << "\n\n";
  o << "[mesh]\nh_interior = " << h_interior << "\nh_boundary = " << h_boundary
    << "\nfine_depth = " << fine_depth << "\n\n";
  o << "[quadrature]\nbeta_points = " << beta_points << "\ns_points = " << s_points
    << "\nfem_beta_points = " << fem_beta_points << "\nfem_s_points = " << fem_s_points
    << "\nmc_samples = " << mc_samples << "\nmc_epsilon = " << mc_epsilon
    << "\nmc_integrands = " << mc_integrands << "\n\n";
  o << "[operators]\npotential = " << operator_potential.name
    << "\npotential_value = " << operator_potential.value
    << "\npotential_amplitude = " << operator_potential.amplitude
    << "\nlambda = " << operator_lambda << "\n\n";
  o << "[scenario]\nnonlinearity = " << nonlinearity << "\nf_a = " << f_a << "\nf_b = " << f_b
    << "\ndissipation_threshold = " << dissipation_threshold
    << "\npotential = " << scenario_potential.name
    << "\npotential_value = " << scenario_potential.value
    << "\npotential_amplitude = " << scenario_potential.amplitude << "\nlambda = ";
  if (scenario_lambda)
    o << *scenario_lambda;
  else
    o << "calibrate";
  o << "\n\n";
  o << "[time]\ndt = " << dt << "\nt_linear = " << t_linear << "\ntau = " << tau
    << "\nattractor_dt = " << attractor_dt << "\nt_transient = " << t_transient
    << "\nt_sample = " << t_sample << "\n\n";
  o << "[tolerances]\nnewton_tol = " << newton_tol << "\ngap_tol = " << gap_tol
    << "\ndelta = " << delta << "\nbranch_delta = " << branch_delta << "\ndedup = " << dedup
    << "\n\n";
  o << "[attractors]\nmodes = " << modes << "\ncoefficients = " << list(coefficients)
    << "\ninitial_radius = " << initial_radius << "\nmax_initial = " << max_initial
    << "\nspacing = " << spacing << "\nmanifold_spacing = " << manifold_spacing
    << "\nt_grow = " << t_grow << "\nseed_fraction = " << seed_fraction
    << "\nabsorbing_radius = " << absorbing_radius << "\n\n";
  o << "[run]\nseed = " << seed << "\nout = " << out << "\n";
  return o.str();
}

ExperimentConfig parse_config(const std::string &text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error &e) {
    throw ConfigError("config parse error at line " + std::to_string(e.line()) + ": " +
                      e.message());
  }
  ExperimentConfig cfg;
  const auto table = setters();
  for (const auto &section : tree) {
    if (section.second.empty() && !section.second.data().empty())
      throw ConfigError(section.first + ": key outside of a section");
    for (const auto &kv : section.second) {
      const std::string key = section.first + "." + kv.first;
      const auto it = table.find(key);
      if (it == table.end())
        throw ConfigError(key + ": unknown key");
      it->second(cfg, key, kv.second.data());
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

} // namespace oscistrip
