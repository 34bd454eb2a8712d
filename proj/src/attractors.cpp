#include "oscistrip/attractors.hpp"

#include "oscistrip/errors.hpp"
#include "oscistrip/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>

namespace oscistrip {

int AttractorSample::add(Vector u, Source src, double t) {
  states.push_back(std::move(u));
  source.push_back(src);
  times.push_back(t);
  return static_cast<int>(states.size()) - 1;
}

void AttractorSample::append(const AttractorSample &other) {
  const int offset = static_cast<int>(states.size());
  states.insert(states.end(), other.states.begin(), other.states.end());
  source.insert(source.end(), other.source.begin(), other.source.end());
  times.insert(times.end(), other.times.begin(), other.times.end());
  for (const auto &l : other.links)
    links.push_back({l[0] + offset, l[1] + offset});
}

double AttractorSample::max_h1(const FemSystem &fem) const {
  double m = 0.0;
  for (const auto &u : states)
    m = std::max(m, fem.h1(u));
  return m;
}

std::string to_string(AttractorSample::Source s) {
  switch (s) {
  case AttractorSample::Source::trajectory_tail:
    return "trajectory-tail";
  case AttractorSample::Source::unstable_manifold:
    return "unstable-manifold";
  case AttractorSample::Source::equilibrium:
    return "equilibrium";
  }
  return "unknown";
}

PencilEigenpairs unstable_directions(const ImexStepper &stepper, const Vector &u, int count) {
  const FemSystem &fem = stepper.system();
  const SparseMatrix a = fem.system() - fem.apply_Fprime(u);
  PencilEigenpairs pairs = lowest_pencil_eigenpairs(a, stepper.lhs(), count);
  const Vector weights = fem.mass() * Vector::Ones(static_cast<Eigen::Index>(fem.size()));
  for (int k = 0; k < count; ++k) {
    Vector v = pairs.vectors.col(k);
    v /= fem.h1(v);
    // Fix the sign: positive mean, or positive largest entry for zero-mean modes.
    double key = weights.dot(v);
    if (std::abs(key) < 1e-8) {
      Eigen::Index i = 0;
      v.cwiseAbs().maxCoeff(&i);
      key = v[i];
    }
    if (key < 0.0)
      v = -v;
    pairs.vectors.col(k) = v;
  }
  return pairs;
}

ManifoldPatch unstable_manifold_patch(const ImexStepper &stepper, const EquilibriumPoint &eq,
                                      const ManifoldOptions &opts) {
  if (!(opts.delta > 0.0))
    throw DomainError("manifold radius delta must be positive");
  const FemSystem &fem = stepper.system();
  ManifoldPatch patch;
  patch.base = eq.state;
  patch.delta = opts.delta;
  patch.seed_radius = opts.seed_fraction * opts.delta;
  const int base_local = patch.local.add(eq.state, AttractorSample::Source::equilibrium, 0.0);
  const int base_trace = patch.trace.add(eq.state, AttractorSample::Source::equilibrium, 0.0);
  patch.local.epsilon = patch.trace.epsilon = fem.epsilon();
  if (eq.morse_index == 0)
    return patch;

  const int m = eq.morse_index;
  const PencilEigenpairs pairs = unstable_directions(stepper, eq.state, m);
  patch.growth_rates = pairs.values;
  for (int k = 0; k < m; ++k)
    patch.directions.push_back(pairs.vectors.col(k));

  std::vector<Vector> seeds_dir;
  if (opts.n_seeds <= 2 * m || m == 1) {
    for (int k = 0; k < m && static_cast<int>(seeds_dir.size()) < std::max(2, opts.n_seeds); ++k) {
      seeds_dir.push_back(patch.directions[k]);
      seeds_dir.push_back(-patch.directions[k]);
    }
  } else {
    const double pi = std::acos(-1.0);
    for (int j = 0; j < opts.n_seeds; ++j) {
      const double th = 2.0 * pi * j / opts.n_seeds;
      Vector d = std::cos(th) * patch.directions[0] + std::sin(th) * patch.directions[1];
      seeds_dir.push_back(d / fem.h1(d));
    }
  }

  const int n = step_count(opts.t_grow, stepper.dt());
  struct Run {
    std::vector<Vector> states;
    std::vector<double> times;
    std::vector<char> inside;
    bool exited = false;
  };
  std::vector<Run> runs(seeds_dir.size());
  parallel_for(seeds_dir.size(), [&](std::size_t i) {
    Run &run = runs[i];
    Vector u = eq.state + patch.seed_radius * seeds_dir[i];
    Vector last = u;
    run.states.push_back(u);
    run.times.push_back(0.0);
    run.inside.push_back(1);
    for (int k = 1; k <= n; ++k) {
      u = stepper.step(u);
      if (fem.h1(u - last) >= opts.spacing || k == n) {
        const bool in = fem.h1(u - eq.state) <= opts.delta;
        run.exited = run.exited || !in;
        run.states.push_back(u);
        run.times.push_back(k * stepper.dt());
        run.inside.push_back(in ? 1 : 0);
        last = u;
      }
    }
  });

  for (const Run &run : runs) {
    int prev_local = base_local, prev_trace = base_trace;
    bool still_local = true;
    for (std::size_t j = 0; j < run.states.size(); ++j) {
      const int t = patch.trace.add(run.states[j], AttractorSample::Source::unstable_manifold,
                                    run.times[j]);
      patch.trace.link(prev_trace, t);
      prev_trace = t;
      still_local = still_local && run.inside[j];
      if (still_local) {
        const int l = patch.local.add(run.states[j], AttractorSample::Source::unstable_manifold,
                                      run.times[j]);
        patch.local.link(prev_local, l);
        prev_local = l;
      }
    }
    patch.exit_count += run.exited ? 1 : 0;
  }
  return patch;
}

double tangency_deviation(const FemSystem &norm, const ManifoldPatch &patch, double radius) {
  const int m = static_cast<int>(patch.directions.size());
  if (m == 0)
    return 0.0;
  const Eigen::Index n = patch.base.size();
  Matrix d(n, m);
  for (int k = 0; k < m; ++k)
    d.col(k) = patch.directions[k];
  const Matrix nd = norm.norm_matrix() * d;
  const Matrix gram = d.transpose() * nd;
  const Eigen::LDLT<Matrix> gram_f(gram);
  double worst = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < patch.local.size(); ++i) {
    if (patch.local.source[i] == AttractorSample::Source::equilibrium)
      continue;
    const Vector w = patch.local.states[i] - patch.base;
    if (norm.h1(w) > radius)
      continue;
    const Vector c = gram_f.solve(nd.transpose() * w);
    const double dev = norm.h1(w - d * c);
    worst = std::isnan(worst) ? dev : std::max(worst, dev);
  }
  return worst;
}

std::vector<Vector> initial_grid(const FemSystem &fem, int modes,
                                 const std::vector<int> &coefficients, double radius,
                                 std::size_t limit) {
  if (modes < 1)
    throw ConfigError("initial grid needs at least one mode");
  const PencilEigenpairs pairs =
      lowest_pencil_eigenpairs(fem.system(), fem.norm_matrix(), modes);
  // Enumerate coefficient tuples; keep one representative per direction.
  std::vector<std::vector<int>> tuples{{}};
  for (int k = 0; k < modes; ++k) {
    std::vector<std::vector<int>> next;
    for (const auto &t : tuples)
      for (int c : coefficients) {
        auto e = t;
        e.push_back(c);
        next.push_back(std::move(e));
      }
    tuples = std::move(next);
  }
  std::map<std::vector<double>, std::vector<int>> directions;
  for (const auto &t : tuples) {
    double norm2 = 0.0;
    for (int c : t)
      norm2 += double(c) * c;
    if (norm2 == 0.0)
      continue;
    std::vector<double> key;
    for (int c : t)
      key.push_back(std::round(1e9 * c / std::sqrt(norm2)) / 1e9);
    directions.emplace(key, t);
  }
  std::vector<std::vector<int>> chosen;
  for (const auto &kv : directions)
    chosen.push_back(kv.second);
  auto support = [](const std::vector<int> &t) {
    return std::count_if(t.begin(), t.end(), [](int c) { return c != 0; });
  };
  std::stable_sort(chosen.begin(), chosen.end(), [&](const auto &a, const auto &b) {
    if (support(a) != support(b))
      return support(a) < support(b);
    // Within a support size: lower modes first, positive before negative.
    for (std::size_t k = 0; k < a.size(); ++k) {
      if ((a[k] != 0) != (b[k] != 0))
        return a[k] != 0;
      if (a[k] != b[k])
        return a[k] > b[k];
    }
    return false;
  });
  if (chosen.size() > limit)
    chosen.resize(limit);
  std::vector<Vector> out;
  for (const auto &t : chosen) {
    Vector u = Vector::Zero(static_cast<Eigen::Index>(fem.size()));
    for (int k = 0; k < modes; ++k)
      u += t[k] * pairs.vectors.col(k);
    out.push_back(u * (radius / fem.h1(u)));
  }
  return out;
}

AttractorSample sample_attractor(const ImexStepper &stepper, const std::vector<Vector> &initial,
                                 const std::vector<EquilibriumPoint> &equilibria,
                                 const std::vector<ManifoldPatch> &patches,
                                 const AttractorOptions &opts) {
  const FemSystem &fem = stepper.system();
  const int n_transient = step_count(opts.t_transient, stepper.dt());
  const int n_sample = step_count(opts.t_sample, stepper.dt());
  std::vector<AttractorSample> tails(initial.size());
  parallel_for(initial.size(), [&](std::size_t i) {
    Vector u = initial[i];
    for (int k = 0; k < n_transient; ++k)
      u = stepper.step(u);
    AttractorSample &tail = tails[i];
    int prev = tail.add(u, AttractorSample::Source::trajectory_tail, opts.t_transient);
    Vector last = u;
    for (int k = 1; k <= n_sample; ++k) {
      u = stepper.step(u);
      if (fem.h1(u - last) >= opts.spacing || k == n_sample) {
        const int j = tail.add(u, AttractorSample::Source::trajectory_tail,
                               opts.t_transient + k * stepper.dt());
        tail.link(prev, j);
        prev = j;
        last = u;
      }
    }
  });
  AttractorSample out;
  out.epsilon = fem.epsilon();
  out.transient = opts.t_transient;
  for (const auto &t : tails)
    out.append(t);
  for (const auto &e : equilibria)
    out.add(e.state, AttractorSample::Source::equilibrium, 0.0);
  for (const auto &p : patches)
    out.append(p.trace);
  if (out.states.empty())
    throw DomainError("attractor sample is empty");
  return out;
}

double hausdorff_semidist(const FemSystem &norm, const AttractorSample &a,
                          const AttractorSample &b, bool use_links) {
  if (a.states.empty() || b.states.empty())
    throw DomainError("semidistance of an empty sample");
  const Eigen::Index n = static_cast<Eigen::Index>(norm.size());
  for (const auto *s : {&a, &b})
    for (const auto &u : s->states)
      if (u.size() != n)
        throw DomainError("samples live on different meshes");
  const Eigen::Index p = static_cast<Eigen::Index>(a.size());
  const Eigen::Index q = static_cast<Eigen::Index>(b.size());
  Matrix x(n, p), y(n, q);
  for (Eigen::Index i = 0; i < p; ++i)
    x.col(i) = a.states[i];
  for (Eigen::Index j = 0; j < q; ++j)
    y.col(j) = b.states[j];
  const Matrix ny = norm.norm_matrix() * y;
  const Matrix g = x.transpose() * ny; // <a_i, b_j>
  Vector bb(q);
  for (Eigen::Index j = 0; j < q; ++j)
    bb[j] = y.col(j).dot(ny.col(j));
  Vector aa(p);
  {
    const Matrix nx = norm.norm_matrix() * x;
    for (Eigen::Index i = 0; i < p; ++i)
      aa[i] = x.col(i).dot(nx.col(i));
  }
  std::vector<double> link_bc; // <b_j, b_k> per link
  if (use_links)
    for (const auto &l : b.links)
      link_bc.push_back(y.col(l[0]).dot(ny.col(l[1])));

  struct Candidate {
    double d2;
    int j, k;   // k < 0 for a point
    double tau;
  };
  std::vector<double> best(static_cast<std::size_t>(p));
  parallel_for(static_cast<std::size_t>(p), [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    std::vector<Candidate> cand;
    cand.reserve(static_cast<std::size_t>(q) + b.links.size());
    for (Eigen::Index j = 0; j < q; ++j)
      cand.push_back({aa[i] + bb[j] - 2.0 * g(i, j), static_cast<int>(j), -1, 0.0});
    if (use_links)
      for (std::size_t l = 0; l < b.links.size(); ++l) {
        const int j = b.links[l][0], k = b.links[l][1];
        const double ee = bb[j] + bb[k] - 2.0 * link_bc[l];
        if (!(ee > 0.0))
          continue;
        const double ae = g(i, k) - g(i, j) - link_bc[l] + bb[j]; // <a - b_j, b_k - b_j>
        const double tau = std::clamp(ae / ee, 0.0, 1.0);
        const double aj = aa[i] + bb[j] - 2.0 * g(i, j);
        cand.push_back({aj - 2.0 * tau * ae + tau * tau * ee, j, k, tau});
      }
    // Gram-based values rank the candidates; the best few are recomputed
    // from the vectors so that coincident states give exactly zero.
    const std::size_t keep = std::min<std::size_t>(3, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + keep, cand.end(),
                      [](const Candidate &u, const Candidate &v) { return u.d2 < v.d2; });
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < keep; ++c) {
      Vector diff = a.states[i] - b.states[cand[c].j];
      if (cand[c].k >= 0 && cand[c].tau > 0.0)
        diff -= cand[c].tau * (b.states[cand[c].k] - b.states[cand[c].j]);
      d = std::min(d, norm.h1(diff));
    }
    best[ii] = d;
  });
  return *std::max_element(best.begin(), best.end());
}

namespace {

double two_sided(const FemSystem &norm, const ManifoldPatch &p, const ManifoldPatch &q) {
  return hausdorff_semidist(norm, p.local, q.local) + hausdorff_semidist(norm, q.local, p.local);
}

} // namespace

std::vector<SemicontinuityRow>
semicontinuity_report(const FemSystem &norm, const std::vector<AttractorSample> &samples,
                      const AttractorSample &limit,
                      const std::vector<std::vector<ManifoldPatch>> &patches,
                      const std::vector<ManifoldPatch> &limit_patches) {
  std::vector<SemicontinuityRow> rows;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    SemicontinuityRow r;
    r.epsilon = samples[k].epsilon;
    r.upper = hausdorff_semidist(norm, samples[k], limit);
    r.lower = hausdorff_semidist(norm, limit, samples[k]);
    r.upper_points = hausdorff_semidist(norm, samples[k], limit, false);
    r.lower_points = hausdorff_semidist(norm, limit, samples[k], false);
    if (k < patches.size()) {
      if (patches[k].size() != limit_patches.size())
        throw CountMismatch("manifold patch count differs from the limit");
      for (std::size_t i = 0; i < limit_patches.size(); ++i)
        r.manifold.push_back(two_sided(norm, patches[k][i], limit_patches[i]));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_semicontinuity_csv(const std::string &path, const std::vector<SemicontinuityRow> &rows) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  const std::size_t m = rows.empty() ? 0 : rows.front().manifold.size();
  out << "epsilon,upper_semidist,lower_semidist";
  for (std::size_t i = 0; i < m; ++i)
    out << ",manifold_dist_eq_" << i;
  out << ",upper_semidist_points,lower_semidist_points\n" << std::setprecision(12);
  for (const auto &r : rows) {
    out << r.epsilon << ',' << r.upper << ',' << r.lower;
    for (double d : r.manifold)
      out << ',' << d;
    out << ',' << r.upper_points << ',' << r.lower_points << '\n';
  }
}

} // namespace oscistrip
