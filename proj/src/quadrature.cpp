#include "oscistrip/quadrature.hpp"

#include "oscistrip/errors.hpp"
#include "oscistrip/gauss.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>

namespace oscistrip {

namespace {

// Most negative curvature factor on a sample grid (0 for convex curves).
double kmin_estimate(const BoundaryCurve &curve) {
  double k = 0.0;
  for (int i = 0; i < 4096; ++i)
    k = std::min(k, curve.curvature_factor(curve.period() * i / 4096.0));
  return k;
}

} // namespace

void QuadSpec::validate() const {
  if (beta_points < 2 || s_points < 2)
    throw ConfigError("quadrature needs at least 2 points per panel");
  if (beta_panels < 1)
    throw ConfigError("quadrature needs at least one beta panel");
  if (!(s_panel_factor > 0.0 && s_panel_factor <= 0.25))
    throw ConfigError("s-panel width factor must lie in (0, 1/4]");
}

std::vector<StripNode> strip_nodes(const StripRegion &region, const QuadSpec &spec) {
  spec.validate();
  const BoundaryCurve &curve = region.curve();
  const double eps = region.epsilon();
  const double T = curve.period();
  double width = spec.s_panel_factor * eps * region.profile().l0;
  if (spec.max_cell > 0.0)
    width = std::min(width, spec.max_cell);
  const long n_s = static_cast<long>(std::ceil(T / width - 1e-9));
  if (n_s < 1 || n_s > 50'000'000)
    throw NumericalError("strip quadrature: invalid s-panel count");
  const double hs = T / static_cast<double>(n_s);
  const GaussRule &rs = gauss_legendre(spec.s_points);
  const GaussRule &rb = gauss_legendre(spec.beta_points);

  std::vector<StripNode> nodes;
  nodes.reserve(static_cast<std::size_t>(n_s) * spec.s_points * spec.beta_points * spec.beta_panels);
  for (long p = 0; p < n_s; ++p) {
    const double mid = (static_cast<double>(p) + 0.5) * hs;
    for (int qs = 0; qs < spec.s_points; ++qs) {
      const double s = mid + 0.5 * hs * rs.nodes[qs];
      const double ws = 0.5 * hs * rs.weights[qs];
      const double g = g_eps(region, s);
      const double depth = eps * g;
      const double kappa = curve.curvature_factor(s);
      int n_b = spec.beta_panels;
      if (spec.max_cell > 0.0)
        n_b = std::max(n_b, static_cast<int>(std::ceil(depth / spec.max_cell - 1e-9)));
      const double hb = 1.0 / n_b;
      const Vec2 z = curve.point(s);
      const Vec2 nrm = curve.normal(s);
      for (int b = 0; b < n_b; ++b) {
        for (int qb = 0; qb < spec.beta_points; ++qb) {
          const double beta = (b + 0.5) * hb + 0.5 * hb * rb.nodes[qb];
          const double wb = 0.5 * hb * rb.weights[qb];
          const double t = depth * beta;
          const double jac = 1.0 - t * kappa;
          if (!(jac > 0.0))
            throw NumericalError("strip quadrature: non-positive Jacobian");
          nodes.push_back({z - t * nrm, ws * wb * g * jac, s, beta});
        }
      }
    }
  }
  return nodes;
}

double conc_integral(const StripRegion &region, const ScalarField &h, const ScalarField &phi,
                     const QuadSpec &spec) {
  double total = 0.0;
  for (const StripNode &n : strip_nodes(region, spec))
    total += n.weight * (h(n.point) * phi(n.point));
  return total;
}

double boundary_integral(const BoundaryCurve &curve, const std::function<double(double)> &weight,
                         const ScalarField &h, const ScalarField &phi) {
  auto integrand = [&](double s) {
    const Vec2 p = curve.point(s);
    return weight(s) * (h(p) * phi(p));
  };
  const double T = curve.period();
  double prev = composite_gauss(integrand, 0.0, T, 64, 8);
  for (int panels = 128; panels <= 1 << 15; panels *= 2) {
    const double next = composite_gauss(integrand, 0.0, T, panels, 8);
    if (std::abs(next - prev) <= 1e-13 * std::max(1.0, std::abs(next)))
      return next;
    prev = next;
  }
  return prev;
}

std::vector<ConvergenceRow> conc_convergence_table(const BoundaryCurve &curve,
                                                   const OscillationProfile &profile,
                                                   const std::vector<double> &eps_ladder,
                                                   const ScalarField &h, const ScalarField &phi,
                                                   const QuadSpec &spec) {
  for (std::size_t i = 1; i < eps_ladder.size(); ++i)
    if (!(eps_ladder[i] < eps_ladder[i - 1]))
      throw ConfigError("epsilon ladder must descend");
  const double limit = boundary_integral(
      curve, [&](double s) { return mu(profile, s); }, h, phi);
  std::vector<ConvergenceRow> rows;
  for (double eps : eps_ladder) {
    const StripRegion region(curve, profile, eps);
    ConvergenceRow row;
    row.epsilon = eps;
    row.value = conc_integral(region, h, phi, spec);
    row.limit = limit;
    row.abs_error = std::abs(row.value - limit);
    row.rate = std::numeric_limits<double>::quiet_NaN();
    if (!rows.empty()) {
      const ConvergenceRow &prev = rows.back();
      if (prev.abs_error > 0.0 && row.abs_error > 0.0)
        row.rate = std::log(prev.abs_error / row.abs_error) / std::log(prev.epsilon / eps);
    }
    rows.push_back(row);
  }
  return rows;
}

double fitted_rate(const std::vector<ConvergenceRow> &rows) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto &r : rows) {
    if (!(r.abs_error > 0.0))
      continue;
    const double x = std::log(r.epsilon), y = std::log(r.abs_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2)
    return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_convergence_csv(const std::string &path, const std::vector<ConvergenceRow> &rows) {
  std::ofstream out(path);
  if (!out)
    throw ConfigError("cannot write " + path);
  out << "epsilon,value,limit,abs_error,rate\n" << std::setprecision(15);
  for (const auto &r : rows) {
    out << r.epsilon << ',' << r.value << ',' << r.limit << ',' << r.abs_error << ',';
    if (!std::isnan(r.rate))
      out << r.rate;
    out << '\n';
  }
}

std::vector<MonteCarloEstimate>
monte_carlo_conc_integrals(const StripRegion &region,
                           const std::vector<std::pair<ScalarField, ScalarField>> &integrands,
                           std::size_t samples, std::uint64_t seed) {
  if (samples < 2)
    throw ConfigError("Monte-Carlo sample count must be at least 2");
  const BoundaryCurve &curve = region.curve();
  const double T = curve.period();
  const double depth = region.epsilon() * region.profile().g1;
  const double jac_max = 1.0 + depth * std::max(0.0, -kmin_estimate(curve));
  // Band measure: int_0^T int_0^depth (1 - t k) dt ds, with int k ds = 2 pi.
  const double band = T * depth - M_PI * depth * depth;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> us(0.0, T), ut(0.0, depth), ua(0.0, 1.0);
  const std::size_t m = integrands.size();
  std::vector<double> sum(m, 0.0), sum2(m, 0.0);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    double s = 0.0, t = 0.0;
    // Rejection on the Jacobian gives points uniform in the band.
    do {
      s = us(rng);
      t = ut(rng);
    } while (ua(rng) * jac_max > 1.0 - t * curve.curvature_factor(s));
    const Vec2 xi = curve.point(s) - t * curve.normal(s);
    if (!strip_membership(region, xi))
      continue;
    ++hits;
    for (std::size_t i = 0; i < m; ++i) {
      const double v = integrands[i].first(xi) * integrands[i].second(xi);
      sum[i] += v;
      sum2[i] += v * v;
    }
  }
  std::vector<MonteCarloEstimate> out(m);
  const double n = static_cast<double>(samples);
  const double scale = band / region.epsilon();
  for (std::size_t i = 0; i < m; ++i) {
    const double mean = sum[i] / n;
    const double var = std::max(0.0, sum2[i] / n - mean * mean);
    out[i] = {scale * mean, scale * std::sqrt(var / (n - 1.0)), hits, samples};
  }
  return out;
}

double strip_lq_norm(const StripRegion &region, const ScalarField &v, double q,
                     const QuadSpec &spec) {
  if (q != 2.0 && q != 4.0)
    throw ConfigError("strip_lq_norm supports q = 2 and q = 4 only");
  double total = 0.0;
  for (const StripNode &n : strip_nodes(region, spec)) {
    const double a = std::abs(v(n.point));
    total += n.weight * (q == 2.0 ? a * a : a * a * a * a);
  }
  return std::pow(total, 1.0 / q);
}

} // namespace oscistrip
