#include "oscistrip/nonlinearity.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace oscistrip {

namespace {
constexpr double kInner = 2.0;
constexpr double kOuter = 3.0;
} // namespace

Nonlinearity::Nonlinearity(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {
  if (kind_ != Kind::linear && kind_ != Kind::bistable)
    return;
  // Quintic p(tau), tau in [0, 1], matching value/slope/curvature of the
  // polynomial core at |u| = 2 and (core(3), 0, 0) at |u| = 3.
  const double v0 = core(kInner, 0), d0 = core(kInner, 1), c0 = core(kInner, 2);
  const double v1 = core(kOuter, 0);
  hermite_[0] = v0;
  hermite_[1] = d0;
  hermite_[2] = 0.5 * c0;
  Eigen::Matrix3d m;
  m << 1, 1, 1, 3, 4, 5, 6, 12, 20;
  const Eigen::Vector3d rhs(v1 - hermite_[0] - hermite_[1] - hermite_[2],
                            -hermite_[1] - 2.0 * hermite_[2], -2.0 * hermite_[2]);
  const Eigen::Vector3d high = m.partialPivLu().solve(rhs);
  hermite_[3] = high[0];
  hermite_[4] = high[1];
  hermite_[5] = high[2];
  primitive_at_2_ = a_ * kInner * kInner / 2.0 - b_ * std::pow(kInner, 4) / 4.0;
  double pint = 0.0;
  for (int k = 0; k < 6; ++k)
    pint += hermite_[k] / (k + 1);
  primitive_at_3_ = primitive_at_2_ + pint;
}

Nonlinearity Nonlinearity::zero() { return Nonlinearity(Kind::zero, 0.0, 0.0); }
Nonlinearity Nonlinearity::constant(double c) { return Nonlinearity(Kind::constant, c, 0.0); }
Nonlinearity Nonlinearity::linear(double a) { return Nonlinearity(Kind::linear, a, 0.0); }
Nonlinearity Nonlinearity::bistable(double a, double b) {
  return Nonlinearity(Kind::bistable, a, b);
}

std::string Nonlinearity::name() const {
  switch (kind_) {
  case Kind::zero:
    return "zero";
  case Kind::constant:
    return "constant";
  case Kind::linear:
    return "linear";
  case Kind::bistable:
    return "bistable";
  }
  return "unknown";
}

double Nonlinearity::core(double u, int order) const {
  switch (order) {
  case 0:
    return a_ * u - b_ * u * u * u;
  case 1:
    return a_ - 3.0 * b_ * u * u;
  default:
    return -6.0 * b_ * u;
  }
}

double Nonlinearity::blend(double tau, int order) const {
  const auto &h = hermite_;
  switch (order) {
  case 0:
    return h[0] + tau * (h[1] + tau * (h[2] + tau * (h[3] + tau * (h[4] + tau * h[5]))));
  case 1:
    return h[1] + tau * (2 * h[2] + tau * (3 * h[3] + tau * (4 * h[4] + tau * 5 * h[5])));
  default:
    return 2 * h[2] + tau * (6 * h[3] + tau * (12 * h[4] + tau * 20 * h[5]));
  }
}

double Nonlinearity::value(double u) const {
  switch (kind_) {
  case Kind::zero:
    return 0.0;
  case Kind::constant:
    return a_;
  default:
    break;
  }
  const double x = std::abs(u);
  const double sign = u < 0.0 ? -1.0 : 1.0;
  if (x <= kInner)
    return core(u, 0);
  if (x <= kOuter)
    return sign * blend(x - kInner, 0);
  return sign * core(kOuter, 0);
}

double Nonlinearity::derivative(double u) const {
  if (kind_ == Kind::zero || kind_ == Kind::constant)
    return 0.0;
  const double x = std::abs(u);
  if (x <= kInner)
    return core(u, 1);
  if (x <= kOuter)
    return blend(x - kInner, 1);
  return 0.0;
}

double Nonlinearity::second_derivative(double u) const {
  if (kind_ == Kind::zero || kind_ == Kind::constant)
    return 0.0;
  const double x = std::abs(u);
  const double sign = u < 0.0 ? -1.0 : 1.0;
  if (x <= kInner)
    return core(u, 2);
  if (x <= kOuter)
    return sign * blend(x - kInner, 2);
  return 0.0;
}

double Nonlinearity::primitive(double u) const {
  switch (kind_) {
  case Kind::zero:
    return 0.0;
  case Kind::constant:
    return a_ * u;
  default:
    break;
  }
  // f is odd, so the primitive is even.
  const double x = std::abs(u);
  if (x <= kInner)
    return a_ * x * x / 2.0 - b_ * x * x * x * x / 4.0;
  if (x <= kOuter) {
    const double tau = x - kInner;
    double p = 0.0, pw = tau;
    for (int k = 0; k < 6; ++k, pw *= tau)
      p += hermite_[k] * pw / (k + 1);
    return primitive_at_2_ + p;
  }
  return primitive_at_3_ + core(kOuter, 0) * (x - kOuter);
}

double Nonlinearity::bound() const {
  double k = 0.0;
  for (int i = 0; i <= 120000; ++i) {
    const double u = -6.0 + 12.0 * i / 120000.0;
    k = std::max({k, std::abs(value(u)), std::abs(derivative(u)), std::abs(second_derivative(u))});
  }
  return k;
}

double Nonlinearity::dissipation_threshold() const {
  double threshold = 0.0;
  for (int i = 0; i <= 60000; ++i) {
    const double u = 6.0 * i / 60000.0;
    if (value(u) * u >= 0.0 || value(-u) * (-u) >= 0.0)
      threshold = u + 1e-4;
  }
  return threshold >= 6.0 ? std::numeric_limits<double>::infinity() : threshold;
}

} // namespace oscistrip
