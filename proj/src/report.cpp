#include "oscistrip/errors.hpp"
#include "oscistrip/studies.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>

namespace oscistrip {

namespace fs = std::filesystem;

namespace {

class Csv {
public:
  Csv(const fs::path &path, const std::string &header) : out_(path) {
    if (!out_)
      throw std::runtime_error("cannot write " + path.string());
    out_ << header << '\n' << std::setprecision(12);
  }
  template <typename... T> void row(const T &...v) {
    bool first = true;
    ((out_ << (first ? "" : ",") << v, first = false), ...);
    out_ << '\n';
  }
  std::ostream &stream() { return out_; }

private:
  std::ofstream out_;
};

struct Writer {
  fs::path dir;
  RunReport &report;

  fs::path path(const std::string &name) {
    report.csv_paths.push_back((dir / name).string());
    return dir / name;
  }
};

void write(Writer &w, const MuStudy &s) {
  Csv csv(w.path("mu.csv"), "s,mu,exact,abs_error");
  for (std::size_t i = 0; i < s.s.size(); ++i)
    csv.row(s.s[i], s.numeric[i], s.exact[i], std::abs(s.numeric[i] - s.exact[i]));
}

void write(Writer &w, const ConcStudy &s) {
  Csv csv(w.path("conc.csv"), "pair,epsilon,value,limit,abs_error,rate");
  for (const auto &p : s.pairs)
    for (const auto &r : p.rows)
      csv.row(p.name, r.epsilon, r.value, r.limit, r.abs_error, r.rate);
  Csv rates(w.path("conc_rates.csv"), "pair,fitted_rate");
  for (const auto &p : s.pairs)
    rates.row(p.name, p.rate);
  if (!s.constant_eps.empty()) {
    Csv c(w.path("conc_constant_profile.csv"), "epsilon,value,closed_form,abs_error");
    for (std::size_t i = 0; i < s.constant_eps.size(); ++i)
      c.row(s.constant_eps[i], s.constant_value[i], s.constant_closed[i],
            std::abs(s.constant_value[i] - s.constant_closed[i]));
  }
}

void write(Writer &w, const OracleStudy &s) {
  Csv csv(w.path("quadrature_oracle.csv"),
          "index,epsilon,seed,quadrature,monte_carlo,std_error,z_score,hits,samples");
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    const auto &r = s.rows[i];
    csv.row(i, s.epsilon, s.seed, r.quadrature, r.mc.value, r.mc.std_error,
            (r.quadrature - r.mc.value) / r.mc.std_error, r.mc.hits, r.mc.samples);
  }
  Csv names(w.path("quadrature_oracle_integrands.csv"), "index,integrand");
  for (std::size_t i = 0; i < s.rows.size(); ++i)
    names.row(i, "\"" + s.rows[i].integrand + "\"");
}

void write(Writer &w, const CoercivityStudy &s) {
  Csv csv(w.path("coercivity.csv"), "epsilon,min_eig,min_eig_sign_changing_potential");
  for (std::size_t i = 0; i < s.epsilon.size(); ++i)
    csv.row(s.epsilon[i], s.constant[i], s.sign_changing[i]);
}

void write(Writer &w, const OperatorGapStudy &s) {
  Csv csv(w.path("operator_gap.csv"), "epsilon,khat,potential_gap");
  for (std::size_t i = 0; i < s.epsilon.size(); ++i)
    csv.row(s.epsilon[i], s.khat[i], s.potential_gap[i]);
}

void write(Writer &w, const NonlinearityStudy &s) {
  Csv b(w.path("reaction_bounds.csv"),
        "epsilon,trace_constant,measure,bound_k,lipschitz_l,max_dual,max_lipschitz_ratio,"
        "k_threshold,l_threshold");
  for (std::size_t i = 0; i < s.epsilon.size(); ++i)
    b.row(s.epsilon[i], s.bounds[i].trace_constant, s.bounds[i].measure, s.bounds[i].bound_k,
          s.bounds[i].lipschitz_l, s.max_dual[i], s.max_ratio[i], s.k_threshold, s.l_threshold);
  Csv f(w.path("frechet.csv"), "epsilon,state,h,error,order");
  for (std::size_t i = 0; i < s.epsilon.size(); ++i)
    for (std::size_t k = 0; k < s.frechet[i].size(); ++k)
      for (std::size_t j = 0; j < s.frechet[i][k].h.size(); ++j)
        f.row(s.epsilon[i], k, s.frechet[i][k].h[j], s.frechet[i][k].error[j],
              s.frechet[i][k].order);
  Csv g(w.path("reaction_gap.csv"), "epsilon,u1,u2,u3,u4,u5");
  for (std::size_t i = 0; i < s.reaction_gap.size(); ++i) {
    g.stream() << s.epsilon[i];
    for (double v : s.reaction_gap[i])
      g.stream() << ',' << v;
    g.stream() << '\n';
  }
}

void write(Writer &w, const SemigroupStudy &s, const std::string &stem) {
  Csv sum(w.path(stem + ".csv"), "epsilon,weighted_sup,power,weight_b");
  for (std::size_t i = 0; i < s.epsilon.size(); ++i)
    sum.row(s.epsilon[i], s.sup[i], s.power, s.weight_b);
  Csv series(w.path(stem + "_series.csv"), "epsilon,t,gap,weighted");
  for (std::size_t i = 0; i < s.epsilon.size(); ++i)
    for (std::size_t k = 0; k < s.series[i].t.size(); ++k)
      series.row(s.epsilon[i], s.series[i].t[k], s.series[i].gap[k], s.series[i].weighted[k]);
}

void write_calibration(Writer &w, const LambdaCalibration &c) {
  Csv csv(w.path("lambda_calibration.csv"), "epsilon,nu1,nu2,window_lo,window_hi,lambda");
  for (std::size_t i = 0; i < c.epsilon.size(); ++i)
    csv.row(c.epsilon[i], c.nu1[i], c.nu2[i], c.window_lo, c.window_hi, c.lambda);
}

void write_nodal(const fs::path &path, const std::string &mesh_file, const Vector &u) {
  std::ofstream out(path);
  out << "mesh " << mesh_file << " vertices " << u.size() << '\n' << std::setprecision(15);
  for (Eigen::Index i = 0; i < u.size(); ++i)
    out << u[i] << '\n';
}

void write(Writer &w, Laboratory &lab, const EquilibriaStudy &s) {
  std::vector<EquilibriumReportRow> rows;
  auto add = [&](double eps, const std::vector<EquilibriumPoint> &pts,
                 const std::vector<double> *dist) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      EquilibriumReportRow r;
      r.epsilon = eps;
      r.index = static_cast<int>(i);
      r.h1_norm = pts[i].h1_norm;
      r.residual = pts[i].residual;
      r.min_eig = pts[i].spectrum.size() ? pts[i].spectrum[0] : 0.0;
      r.morse_index = pts[i].morse_index;
      r.dist_to_limit_partner = dist ? (*dist)[i] : 0.0;
      rows.push_back(r);
    }
  };
  for (std::size_t k = 0; k < s.epsilon.size(); ++k)
    add(s.epsilon[k], s.points[k], &s.distance[k]);
  add(0.0, s.limit, nullptr);
  write_equilibria_csv(w.path("equilibria.csv").string(), rows);

  write_mesh(*lab.mesh(), (w.dir / "mesh.txt").string());
  fs::create_directories(w.dir / "states");
  for (std::size_t k = 0; k < s.epsilon.size(); ++k)
    for (std::size_t i = 0; i < s.points[k].size(); ++i) {
      std::ostringstream name;
      name << "equilibrium_eps" << s.epsilon[k] << "_" << i << ".txt";
      write_nodal(w.dir / "states" / name.str(), "../mesh.txt", s.points[k][i].state);
    }
  for (std::size_t i = 0; i < s.limit.size(); ++i)
    write_nodal(w.dir / "states" / ("equilibrium_eps0_" + std::to_string(i) + ".txt"),
                "../mesh.txt", s.limit[i].state);
}

void write(Writer &w, const AttractorStudy &s) {
  write_semicontinuity_csv(w.path("semicontinuity.csv").string(), s.rows);
  Csv a(w.path("attractor_samples.csv"),
        "epsilon,sample_size,max_h1,patch_points,manifold_exits,tangency_order");
  for (std::size_t i = 0; i < s.epsilon.size(); ++i)
    a.row(s.epsilon[i], s.sample_size[i], s.max_h1[i], s.patch_points[i], s.exit_count[i],
          s.tangency_order[i]);
  Csv t(w.path("manifold_tangency.csv"), "epsilon,radius,deviation");
  for (std::size_t i = 0; i < s.epsilon.size(); ++i)
    for (std::size_t k = 0; k < s.tangency[i].size(); ++k)
      t.row(s.epsilon[i], s.radii[k], s.tangency[i][k]);
}

} // namespace

const std::vector<std::string> &suite_names() {
  static const std::vector<std::string> names{"mu",        "conc",       "coercivity",
                                              "operators", "semigroup",  "equilibria",
                                              "attractors", "full"};
  return names;
}

RunReport run_suite(const ExperimentConfig &cfg, const std::string &suite,
                    const std::string &out_dir, std::ostream *log) {
  const auto &names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw ConfigError("unknown suite '" + suite + "'");
  const bool full = suite == "full";
  auto wants = [&](const char *s) { return full || suite == s; };

  RunReport report;
  report.suite = suite;
  report.config_echo = cfg.echo();
  fs::create_directories(out_dir);
  Writer w{fs::path(out_dir), report};
  Laboratory lab(cfg, log);

  auto timed = [&](const std::string &name, auto &&fn) {
    if (log)
      *log << "== " << name << std::endl;
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.timings.emplace_back(name, sec);
    if (log)
      *log << "   " << name << " took " << std::fixed << std::setprecision(1) << sec << " s"
           << std::defaultfloat << std::endl;
  };
  auto add = [&](std::vector<Check> checks) {
    for (auto &c : checks)
      report.checks.push_back(std::move(c));
  };

  if (wants("mu"))
    timed("mu", [&] {
      const auto s = mu_study(lab);
      write(w, s);
      add(evaluate(s));
    });
  if (wants("conc")) {
    timed("conc", [&] {
      const auto s = conc_study(lab);
      write(w, s);
      add(evaluate(s));
    });
    timed("quadrature-oracle", [&] {
      const auto s = oracle_study(lab);
      write(w, s);
      add(evaluate(s));
    });
  }
  if (wants("coercivity"))
    timed("coercivity", [&] {
      const auto s = coercivity_study(lab);
      write(w, s);
      add(evaluate(s));
    });
  const bool scenario = wants("operators") || wants("semigroup") || wants("equilibria") ||
                        wants("attractors");
  if (scenario)
    timed("lambda-calibration", [&] { write_calibration(w, lab.calibration()); });
  if (wants("operators")) {
    timed("operator-gap", [&] {
      const auto s = operator_gap_study(lab);
      write(w, s);
      add(evaluate(s));
    });
    timed("nonlinearity", [&] {
      const auto s = nonlinearity_study(lab);
      write(w, s);
      add(evaluate(s));
    });
  }
  if (wants("semigroup")) {
    timed("linear-semigroup", [&] {
      const auto s = linear_semigroup_study(lab);
      write(w, s, "linear_semigroup");
      add(evaluate_linear(s));
    });
    timed("nonlinear-semigroup", [&] {
      const auto s = nonlinear_semigroup_study(lab);
      write(w, s, "nonlinear_semigroup");
      add(evaluate_nonlinear(s));
    });
  }
  if (wants("equilibria"))
    timed("equilibria", [&] {
      const auto s = equilibria_study(lab);
      write(w, lab, s);
      add(evaluate(s, cfg));
    });
  if (wants("attractors"))
    timed("attractors", [&] {
      const auto s = attractor_study(lab);
      write(w, s);
      add(evaluate(s, cfg));
    });

  {
    std::ofstream echo(w.dir / "config.ini");
    echo << report.config_echo;
  }
  {
    std::ofstream sum(w.dir / "summary.txt");
    sum << "suite " << suite << "\n";
    for (const auto &c : report.checks)
      sum << (c.passed ? "PASS" : "FAIL") << (c.acceptance ? " [acceptance] " : " [property]   ")
          << c.id << ": " << c.description << (c.detail.empty() ? "" : " (" + c.detail + ")")
          << "\n";
    sum << (report.passed() ? "RESULT PASS" : "RESULT FAIL") << "\n";
  }
  nlohmann::json j;
  j["suite"] = suite;
  j["passed"] = report.passed();
  j["config"] = report.config_echo;
  j["csv"] = report.csv_paths;
  for (const auto &c : report.checks)
    j["checks"].push_back({{"id", c.id},
                           {"description", c.description},
                           {"acceptance", c.acceptance},
                           {"passed", c.passed},
                           {"detail", c.detail}});
  for (const auto &[name, sec] : report.timings)
    j["timings_seconds"][name] = sec;
  std::ofstream(w.dir / "report.json") << j.dump(2) << "\n";
  return report;
}

} // namespace oscistrip
