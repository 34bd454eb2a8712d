#pragma once

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace oscistrip {

using Vec2 = Eigen::Vector2d;

/// Closed, counter-clockwise, unit-speed C2 parametrization of the boundary.
///
/// The parameter s is arclength on [0, T]. The outward normal is
/// N(s) = (y'(s), -x'(s)) and the curvature factor is x'y'' - y'x''
/// (equal to 1/R on a circle of radius R).
class BoundaryCurve {
public:
  class Shape {
  public:
    virtual ~Shape() = default;
    virtual double period() const = 0;
    virtual Vec2 point(double s) const = 0;
    virtual Vec2 d1(double s) const = 0;
    virtual Vec2 d2(double s) const = 0;
    virtual std::optional<double> circle_radius() const { return std::nullopt; }
    virtual std::string name() const = 0;
  };

  explicit BoundaryCurve(std::shared_ptr<const Shape> shape);

  static BoundaryCurve circle(double radius = 1.0);
  /// Ellipse with semi-axes a (x) and b (y), reparametrized by arclength.
  static BoundaryCurve ellipse(double a, double b);

  double period() const { return period_; }
  Vec2 point(double s) const { return shape_->point(s); }
  Vec2 tangent(double s) const { return shape_->d1(s); }
  Vec2 second_derivative(double s) const { return shape_->d2(s); }
  Vec2 normal(double s) const;
  double curvature_factor(double s) const;
  /// max over s of the positive part of the curvature factor (sampled).
  double max_positive_curvature() const { return max_kappa_plus_; }
  std::optional<double> circle_radius() const { return shape_->circle_radius(); }
  std::string name() const { return shape_->name(); }

  /// Maps s into [0, T).
  double wrap(double s) const;

  /// Foot of the closest-point projection of xi onto the curve.
  /// Throws NumericalError when the Newton iteration does not converge.
  double closest_parameter(const Vec2 &xi) const;

private:
  std::shared_ptr<const Shape> shape_;
  double period_ = 0.0;
  double max_kappa_plus_ = 0.0;
  std::vector<Vec2> lookup_; // 4096 uniform samples in s
};

/// Oscillation profile g(s, y), l(s)-periodic in y, with bounds
/// 0 < g0 <= g <= g1 and 0 < l0 <= l <= l1.
struct OscillationProfile {
  std::function<double(double, double)> g;
  std::function<double(double)> period;
  double g0 = 0.0;
  double g1 = 0.0;
  double l0 = 0.0;
  double l1 = 0.0;
  std::string name = "custom";
  /// Closed-form mean over one period where the preset has one (else empty).
  std::function<double(double)> exact_mean;

  /// g == c.
  static OscillationProfile constant(double c);
  /// g(s, y) = 2 + cos(y), period 2*pi.
  static OscillationProfile two_plus_cos();
  /// g(s, y) = a + b sin(s) + c cos(y), period 2*pi; requires a > |b| + |c|.
  static OscillationProfile modulated(double a, double b, double c);
  /// g(s, y) = a + c cos(2 pi y / l(s)) with l(s) = 2 pi (1 + m sin s).
  static OscillationProfile variable_period(double a, double c, double m);

  /// Checks bounds and periodicity on a sample grid; throws ConfigError.
  void validate(double T, int samples = 257) const;
};

/// Mean of g(s, .) over one period (composite 32-point Gauss-Legendre,
/// doubled until successive values differ by less than 1e-12).
double mu(const OscillationProfile &profile, double s);

/// Point in strip coordinates: xi = zeta(s) - t N(s).
struct StripCoords {
  double s = 0.0;
  double t = 0.0;
};

struct StripPoint {
  Vec2 point;
  double jacobian = 1.0; // |det J Psi| = 1 - t * curvature factor
};

/// The eps-strip omega_eps = { zeta(s) - t N(s) : 0 <= t < eps g_eps(s) }.
class StripRegion {
public:
  /// Throws ConfigError when epsilon is not in (0, eps0].
  StripRegion(BoundaryCurve curve, OscillationProfile profile, double epsilon,
              double eps_clamp = 1.0);

  const BoundaryCurve &curve() const { return curve_; }
  const OscillationProfile &profile() const { return profile_; }
  double epsilon() const { return epsilon_; }
  double eps0() const { return eps0_; }

  /// eps0 = min(clamp, 0.9 / (g1 * max curvature_+)).
  static double compute_eps0(const BoundaryCurve &curve,
                             const OscillationProfile &profile,
                             double eps_clamp = 1.0);

private:
  BoundaryCurve curve_;
  OscillationProfile profile_;
  double epsilon_;
  double eps0_;
};

/// g(s, s / eps). Throws DomainError for s outside [0, T].
double g_eps(const StripRegion &region, double s);

/// Psi(t, s) with its Jacobian. Throws DomainError for t outside
/// [0, eps g_eps(s)) and NumericalError for a non-positive Jacobian.
StripPoint strip_map(const StripRegion &region, double s, double t);

/// Inverse of strip_map on omega_eps; empty when xi is not in the strip.
std::optional<StripCoords> strip_membership(const StripRegion &region,
                                            const Vec2 &xi);

} // namespace oscistrip
