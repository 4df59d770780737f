#pragma once

#include "accel/problems.hpp"

namespace accel {

/// One side-by-side evaluation of an inequality lhs <= rhs.
struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;

  /// rhs - lhs; negative means violated.
  double slack() const { return rhs - lhs; }

  /// lhs <= rhs up to rel_tol * (1 + |lhs| + |rhs|).
  bool holds(double rel_tol = 1e-9) const;
};

/// f(y) >= f(x) + <grad f(x), y - x> + (mu/2)||y - x||^2, as lhs <= rhs.
InequalityCheck strong_convexity(const SmoothOracle& f, const Vector& x, const Vector& y);

/// ||grad f(x) - grad f(y)|| <= L ||x - y||.
InequalityCheck gradient_lipschitz(const SmoothOracle& f, const Vector& x, const Vector& y);

/// f(y - s grad f(y)) - f(x)
///   <= <grad f(y), y - x> - (mu/2)||y - x||^2 - (s - L s^2 / 2)||grad f(y)||^2.
InequalityCheck fundamental_inequality(const SmoothOracle& f, const Vector& x, const Vector& y,
                                       double s);

/// 2 mu (f(y - s grad f(y)) - f*) <= ||grad f(y)||^2.
InequalityCheck gradient_dominance(const SmoothOracle& f, const Vector& y, double s,
                                   double f_star);

/// Composite counterpart of fundamental_inequality with G_s in place of the gradient.
InequalityCheck proximal_fundamental_inequality(const CompositeObjective& problem,
                                                const Vector& x, const Vector& y, double s);

/// 2 mu (Phi(y - s G_s(y)) - Phi*) <= ||G_s(y)||^2.
InequalityCheck proximal_gradient_dominance(const CompositeObjective& problem, const Vector& y,
                                            double s, double phi_star);

}  // namespace accel
