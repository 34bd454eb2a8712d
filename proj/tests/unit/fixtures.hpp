#pragma once

#include "oscistrip/fem.hpp"
#include "oscistrip/linalg.hpp"

#include <algorithm>
#include <map>

#include <memory>

namespace fixtures {

using namespace oscistrip;

// Coarse disk resolving strips down to eps = 0.1 (h_boundary = eps / 4).
inline std::shared_ptr<const Mesh> coarse_mesh() {
  static const auto mesh = std::make_shared<const Mesh>(generate_disk_mesh(1.0, 0.2, 0.025, 0.05));
  return mesh;
}

inline QuadSpec fem_spec() {
  QuadSpec q;
  q.beta_points = 2;
  q.s_points = 3;
  q.max_cell = 0.025;
  return q;
}

inline StripRegion region(double eps,
                          const OscillationProfile &g = OscillationProfile::two_plus_cos()) {
  return StripRegion(BoundaryCurve::circle(), g, eps);
}

inline FemSystem strip(double eps, double V, Nonlinearity f, double lambda) {
  StripPotential pot;
  if (V != 0.0)
    pot = [V](const Vec2 &, double) { return V; };
  return FemSystem::strip(coarse_mesh(), region(eps), pot, std::move(f), lambda, fem_spec());
}

inline FemSystem limit(double V, Nonlinearity f, double lambda) {
  BoundaryWeight pot;
  if (V != 0.0)
    pot = [V](double) { return 2.0 * V; };
  return FemSystem::limit(coarse_mesh(), OscillationProfile::two_plus_cos(), pot, std::move(f),
                          lambda);
}

inline FemSystem system(double eps, double V, Nonlinearity f, double lambda) {
  return eps == 0.0 ? limit(V, std::move(f), lambda) : strip(eps, V, std::move(f), lambda);
}

// Bistable scenario on the coarse mesh (V = 0.75), lambda set to the middle of
// the window giving exactly one unstable direction at u = 0 on {0.2, 0.1, 0}.
inline double scenario_lambda() {
  static const double lambda = [] {
    double lo = 0.0, hi = 1e300;
    for (double eps : {0.2, 0.1, 0.0}) {
      const FemSystem s = system(eps, 0.75, Nonlinearity::bistable(), 0.0);
      const auto n = static_cast<Eigen::Index>(s.size());
      const SparseMatrix a = s.system() - s.apply_Fprime(Vector::Zero(n));
      lo = std::max(lo, -pencil_eigenvalue(a, s.mass(), 2));
      hi = std::min(hi, -pencil_eigenvalue(a, s.mass(), 1));
    }
    return 0.5 * (lo + hi);
  }();
  return lambda;
}

inline const FemSystem &scenario(double eps) {
  static std::map<double, FemSystem> cache;
  auto it = cache.find(eps);
  if (it == cache.end())
    it = cache.emplace(eps, system(eps, 0.75, Nonlinearity::bistable(), scenario_lambda())).first;
  return it->second;
}

} // namespace fixtures
