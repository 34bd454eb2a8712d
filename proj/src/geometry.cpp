#include "oscistrip/geometry.hpp"

#include "oscistrip/errors.hpp"
#include "oscistrip/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace oscistrip {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kLookupSamples = 4096;

class CircleShape final : public BoundaryCurve::Shape {
public:
  explicit CircleShape(double r) : r_(r) {}
  double period() const override { return kTwoPi * r_; }
  Vec2 point(double s) const override {
    return {r_ * std::cos(s / r_), r_ * std::sin(s / r_)};
  }
  Vec2 d1(double s) const override {
    return {-std::sin(s / r_), std::cos(s / r_)};
  }
  Vec2 d2(double s) const override {
    return {-std::cos(s / r_) / r_, -std::sin(s / r_) / r_};
  }
  std::optional<double> circle_radius() const override { return r_; }
  std::string name() const override { return "circle"; }

private:
  double r_;
};

// Ellipse (a cos th, b sin th) with th = th(s) obtained by inverting the
// arclength integral with Newton's method.
class EllipseShape final : public BoundaryCurve::Shape {
public:
  EllipseShape(double a, double b) : a_(a), b_(b) {
    theta_.resize(kTable + 1);
    arc_.resize(kTable + 1);
    arc_[0] = 0.0;
    for (int k = 0; k <= kTable; ++k)
      theta_[k] = kTwoPi * k / kTable;
    for (int k = 0; k < kTable; ++k)
      arc_[k + 1] = arc_[k] + arc_piece(theta_[k], theta_[k + 1]);
    period_ = arc_.back();
  }

  double period() const override { return period_; }
  Vec2 point(double s) const override {
    const double th = theta_of(s);
    return {a_ * std::cos(th), b_ * std::sin(th)};
  }
  Vec2 d1(double s) const override {
    const double th = theta_of(s);
    const Vec2 dt = dtheta(th);
    return dt / dt.norm();
  }
  Vec2 d2(double s) const override {
    const double th = theta_of(s);
    const Vec2 dt = dtheta(th);
    const Vec2 ddt{-a_ * std::cos(th), -b_ * std::sin(th)};
    const double sp2 = dt.squaredNorm();
    return (ddt - (dt.dot(ddt) / sp2) * dt) / sp2;
  }
  std::string name() const override { return "ellipse"; }

private:
  static constexpr int kTable = 1024;

  Vec2 dtheta(double th) const { return {-a_ * std::sin(th), b_ * std::cos(th)}; }
  double speed(double th) const { return dtheta(th).norm(); }
  double arc_piece(double t0, double t1) const {
    return composite_gauss([this](double th) { return speed(th); }, t0, t1, 1, 16);
  }
  double arc_at(double th) const {
    const int k = std::clamp(static_cast<int>(th / kTwoPi * kTable), 0, kTable - 1);
    return arc_[k] + arc_piece(theta_[k], th);
  }
  double theta_of(double s) const {
    const double sw = s - period_ * std::floor(s / period_);
    auto it = std::upper_bound(arc_.begin(), arc_.end(), sw);
    const int k = std::clamp(static_cast<int>(it - arc_.begin()) - 1, 0, kTable - 1);
    double th = theta_[k] + (sw - arc_[k]) / (arc_[k + 1] - arc_[k]) * (theta_[k + 1] - theta_[k]);
    for (int it2 = 0; it2 < 30; ++it2) {
      const double d = (arc_at(th) - sw) / speed(th);
      th -= d;
      if (std::abs(d) < 1e-15)
        break;
    }
    return th + kTwoPi * std::floor(s / period_);
  }

  double a_, b_;
  double period_ = 0.0;
  std::vector<double> theta_, arc_;
};

} // namespace

BoundaryCurve::BoundaryCurve(std::shared_ptr<const Shape> shape) : shape_(std::move(shape)) {
  period_ = shape_->period();
  lookup_.reserve(kLookupSamples);
  for (int k = 0; k < kLookupSamples; ++k) {
    const double s = period_ * k / kLookupSamples;
    lookup_.push_back(shape_->point(s));
    max_kappa_plus_ = std::max(max_kappa_plus_, curvature_factor(s));
  }
}

BoundaryCurve BoundaryCurve::circle(double radius) {
  if (!(radius > 0.0))
    throw ConfigError("circle radius must be positive");
  return BoundaryCurve(std::make_shared<CircleShape>(radius));
}

BoundaryCurve BoundaryCurve::ellipse(double a, double b) {
  if (!(a > 0.0 && b > 0.0))
    throw ConfigError("ellipse semi-axes must be positive");
  return BoundaryCurve(std::make_shared<EllipseShape>(a, b));
}

Vec2 BoundaryCurve::normal(double s) const {
  const Vec2 d = tangent(s);
  return {d.y(), -d.x()};
}

double BoundaryCurve::curvature_factor(double s) const {
  const Vec2 d = tangent(s);
  const Vec2 dd = second_derivative(s);
  return d.x() * dd.y() - d.y() * dd.x();
}

double BoundaryCurve::wrap(double s) const {
  double w = std::fmod(s, period_);
  if (w < 0.0)
    w += period_;
  if (w >= period_)
    w = 0.0;
  return w;
}

double BoundaryCurve::closest_parameter(const Vec2 &xi) const {
  if (auto r = circle_radius()) {
    const double ang = std::atan2(xi.y(), xi.x());
    return wrap(*r * ang);
  }
  int best = 0;
  double best_d = (lookup_[0] - xi).squaredNorm();
  for (int k = 1; k < kLookupSamples; ++k) {
    const double d = (lookup_[k] - xi).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  double s = period_ * best / kLookupSamples;
  for (int it = 0; it < 50; ++it) {
    const Vec2 diff = xi - point(s);
    const double phi = diff.dot(tangent(s));
    const double dphi = -1.0 + diff.dot(second_derivative(s));
    if (!(dphi < 0.0))
      break;
    const double step = phi / dphi;
    s -= step;
    if (std::abs(step) < 1e-14 * period_)
      return wrap(s);
  }
  std::ostringstream msg;
  msg << "closest-point projection did not converge for xi = (" << xi.x() << ", "
      << xi.y() << "), last s = " << s;
  throw NumericalError(msg.str());
}

// ---------------------------------------------------------------------------

OscillationProfile OscillationProfile::constant(double c) {
  if (!(c > 0.0))
    throw ConfigError("constant profile must be positive");
  OscillationProfile p;
  p.g = [c](double, double) { return c; };
  p.period = [](double) { return kTwoPi; };
  p.g0 = p.g1 = c;
  p.l0 = p.l1 = kTwoPi;
  p.name = "constant";
  p.exact_mean = [c](double) { return c; };
  return p;
}

OscillationProfile OscillationProfile::two_plus_cos() {
  OscillationProfile p;
  p.g = [](double, double y) { return 2.0 + std::cos(y); };
  p.period = [](double) { return kTwoPi; };
  p.g0 = 1.0;
  p.g1 = 3.0;
  p.l0 = p.l1 = kTwoPi;
  p.name = "two-plus-cos";
  p.exact_mean = [](double) { return 2.0; };
  return p;
}

OscillationProfile OscillationProfile::modulated(double a, double b, double c) {
  if (!(a > std::abs(b) + std::abs(c)))
    throw ConfigError("modulated profile requires a > |b| + |c|");
  OscillationProfile p;
  p.g = [a, b, c](double s, double y) { return a + b * std::sin(s) + c * std::cos(y); };
  p.period = [](double) { return kTwoPi; };
  p.g0 = a - std::abs(b) - std::abs(c);
  p.g1 = a + std::abs(b) + std::abs(c);
  p.l0 = p.l1 = kTwoPi;
  p.name = "modulated";
  p.exact_mean = [a, b](double s) { return a + b * std::sin(s); };
  return p;
}

OscillationProfile OscillationProfile::variable_period(double a, double c, double m) {
  if (!(a > std::abs(c)) || !(std::abs(m) < 1.0))
    throw ConfigError("variable-period profile requires a > |c| and |m| < 1");
  OscillationProfile p;
  p.period = [m](double s) { return kTwoPi * (1.0 + m * std::sin(s)); };
  p.g = [a, c, m](double s, double y) {
    return a + c * std::cos(y / (1.0 + m * std::sin(s)));
  };
  p.g0 = a - std::abs(c);
  p.g1 = a + std::abs(c);
  p.l0 = kTwoPi * (1.0 - std::abs(m));
  p.l1 = kTwoPi * (1.0 + std::abs(m));
  p.name = "variable-period";
  p.exact_mean = [a](double) { return a; };
  return p;
}

void OscillationProfile::validate(double T, int samples) const {
  if (!(g0 > 0.0) || !(g1 >= g0) || !(l0 > 0.0) || !(l1 >= l0))
    throw ConfigError("oscillation profile bounds must satisfy 0 < g0 <= g1, 0 < l0 <= l1");
  for (int i = 0; i < samples; ++i) {
    const double s = T * i / (samples - 1);
    const double l = period(s);
    if (l < l0 - 1e-12 || l > l1 + 1e-12)
      throw ConfigError("oscillation period outside [l0, l1] at s = " + std::to_string(s));
    for (int j = 0; j < 17; ++j) {
      const double y = 3.0 * l * j / 16.0 - l;
      const double v = g(s, y);
      if (v < g0 - 1e-12 || v > g1 + 1e-12)
        throw ConfigError("oscillation profile outside [g0, g1] at s = " + std::to_string(s));
      if (std::abs(g(s, y + l) - v) > 1e-10)
        throw ConfigError("oscillation profile is not l(s)-periodic at s = " + std::to_string(s));
    }
  }
}

double mu(const OscillationProfile &profile, double s) {
  const double l = profile.period(s);
  auto gs = [&](double y) { return profile.g(s, y); };
  double prev = composite_gauss(gs, 0.0, l, 1, 32) / l;
  for (int panels = 2; panels <= 1 << 12; panels *= 2) {
    const double next = composite_gauss(gs, 0.0, l, panels, 32) / l;
    if (std::abs(next - prev) < 1e-12)
      return next;
    prev = next;
  }
  return prev;
}

// ---------------------------------------------------------------------------

StripRegion::StripRegion(BoundaryCurve curve, OscillationProfile profile, double epsilon,
                         double eps_clamp)
    : curve_(std::move(curve)), profile_(std::move(profile)), epsilon_(epsilon) {
  eps0_ = compute_eps0(curve_, profile_, eps_clamp);
  if (!(epsilon_ > 0.0))
    throw ConfigError("epsilon must be positive");
  if (epsilon_ > eps0_) {
    std::ostringstream msg;
    msg << "epsilon = " << epsilon_ << " exceeds eps0 = " << eps0_
        << " (strip map would not be injective)";
    throw ConfigError(msg.str());
  }
}

double StripRegion::compute_eps0(const BoundaryCurve &curve, const OscillationProfile &profile,
                                 double eps_clamp) {
  const double kp = curve.max_positive_curvature();
  if (kp <= 0.0)
    return eps_clamp;
  return std::min(eps_clamp, 0.9 / (profile.g1 * kp));
}

namespace {

void check_arclength(const StripRegion &region, double s) {
  const double T = region.curve().period();
  if (!(s >= 0.0 && s <= T)) {
    std::ostringstream msg;
    msg << "arclength s = " << s << " outside [0, " << T << "]";
    throw DomainError(msg.str());
  }
}

} // namespace

double g_eps(const StripRegion &region, double s) {
  check_arclength(region, s);
  return region.profile().g(s, s / region.epsilon());
}

StripPoint strip_map(const StripRegion &region, double s, double t) {
  const double depth = region.epsilon() * g_eps(region, s);
  if (!(t >= 0.0 && t < depth)) {
    std::ostringstream msg;
    msg << "depth t = " << t << " outside [0, " << depth << ") at s = " << s;
    throw DomainError(msg.str());
  }
  const BoundaryCurve &c = region.curve();
  StripPoint out;
  out.point = c.point(s) - t * c.normal(s);
  out.jacobian = 1.0 - t * c.curvature_factor(s);
  if (!(out.jacobian > 0.0))
    throw NumericalError("strip map Jacobian is not positive; epsilon exceeds eps0");
  return out;
}

std::optional<StripCoords> strip_membership(const StripRegion &region, const Vec2 &xi) {
  const BoundaryCurve &c = region.curve();
  StripCoords out;
  if (auto r = c.circle_radius()) {
    out.t = *r - xi.norm();
    out.s = c.closest_parameter(xi);
  } else {
    out.s = c.closest_parameter(xi);
    out.t = (c.point(out.s) - xi).dot(c.normal(out.s));
  }
  if (out.t < 0.0) {
    if (out.t < -1e-12)
      return std::nullopt;
    out.t = 0.0;
  }
  if (out.t >= region.epsilon() * g_eps(region, out.s))
    return std::nullopt;
  return out;
}

} // namespace oscistrip
