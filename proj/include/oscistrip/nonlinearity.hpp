#pragma once

#include <array>
#include <string>

namespace oscistrip {

/// Reaction term f with its first two derivatives and primitive.
///
/// The bistable kind is f(u) = a u - b u^3 on |u| <= 2, joined by a quintic
/// Hermite blend on 2 <= |u| <= 3 to the constant value of the cubic at
/// |u| = 3, so that f, f', f'' are globally bounded and f is C2 and odd.
class Nonlinearity {
public:
  enum class Kind { zero, constant, linear, bistable };

  static Nonlinearity zero();
  static Nonlinearity constant(double c);
  /// f(u) = a u on |u| <= 2, blended to a constant like the bistable kind.
  static Nonlinearity linear(double a);
  static Nonlinearity bistable(double a = 1.0, double b = 1.0);

  double value(double u) const;
  double derivative(double u) const;
  double second_derivative(double u) const;
  /// int_0^u f.
  double primitive(double u) const;

  Kind kind() const { return kind_; }
  std::string name() const;
  /// max(|f|, |f'|, |f''|) by dense sampling of [-6, 6].
  double bound() const;
  /// Smallest s >= 0 on a sample grid beyond which f(u) u < 0 for all |u| >= s;
  /// infinity when no such s exists on [-6, 6].
  double dissipation_threshold() const;

private:
  Nonlinearity(Kind kind, double a, double b);
  double core(double u, int order) const; // polynomial part, |u| <= 2
  double blend(double tau, int order) const;

  Kind kind_;
  double a_ = 0.0;
  double b_ = 0.0;
  std::array<double, 6> hermite_{}; // coefficients in tau = |u| - 2
  double primitive_at_2_ = 0.0;
  double primitive_at_3_ = 0.0;
};

} // namespace oscistrip
