#pragma once

#include <vector>

namespace oscistrip {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Returns the n-point rule (n >= 1). Rules are cached per n.
const GaussRule &gauss_legendre(int n);

/// Integrates a callable over [a, b] with `panels` equal panels of an n-point rule.
template <class F>
double composite_gauss(F &&fn, double a, double b, int panels, int n) {
  const GaussRule &rule = gauss_legendre(n);
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double part = 0.0;
    for (int q = 0; q < n; ++q)
      part += rule.weights[q] * fn(mid + 0.5 * h * rule.nodes[q]);
    total += 0.5 * h * part;
  }
  return total;
}

} // namespace oscistrip
