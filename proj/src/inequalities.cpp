#include "accel/inequalities.hpp"

#include "accel/proximal.hpp"

#include <cmath>

namespace accel {

bool InequalityCheck::holds(double rel_tol) const {
  return lhs <= rhs + rel_tol * (1.0 + std::abs(lhs) + std::abs(rhs));
}

InequalityCheck strong_convexity(const SmoothOracle& f, const Vector& x, const Vector& y) {
  const Vector d = y - x;
  return {f.value(x) + f.gradient(x).dot(d) + 0.5 * f.mu() * d.squaredNorm(), f.value(y)};
}

InequalityCheck gradient_lipschitz(const SmoothOracle& f, const Vector& x, const Vector& y) {
  return {(f.gradient(x) - f.gradient(y)).norm(), f.lipschitz() * (x - y).norm()};
}

InequalityCheck fundamental_inequality(const SmoothOracle& f, const Vector& x, const Vector& y,
                                       double s) {
  check_step_size(s, f.lipschitz());
  const Vector g = f.gradient(y);
  const Vector d = y - x;
  const double lhs = f.value(y - s * g) - f.value(x);
  const double rhs = g.dot(d) - 0.5 * f.mu() * d.squaredNorm() -
                     (s - 0.5 * f.lipschitz() * s * s) * g.squaredNorm();
  return {lhs, rhs};
}

InequalityCheck gradient_dominance(const SmoothOracle& f, const Vector& y, double s,
                                   double f_star) {
  check_step_size(s, f.lipschitz());
  const Vector g = f.gradient(y);
  return {2.0 * f.mu() * (f.value(y - s * g) - f_star), g.squaredNorm()};
}

InequalityCheck proximal_fundamental_inequality(const CompositeObjective& problem,
                                                const Vector& x, const Vector& y, double s) {
  const auto& f = problem.smooth();
  const ProxResult p = prox(problem, y, s);
  const Vector d = y - x;
  const double lhs = problem.phi(p.p_value) - problem.phi(x);
  const double rhs = p.subgradient.dot(d) - 0.5 * f.mu() * d.squaredNorm() -
                     (s - 0.5 * f.lipschitz() * s * s) * p.subgradient.squaredNorm();
  return {lhs, rhs};
}

InequalityCheck proximal_gradient_dominance(const CompositeObjective& problem, const Vector& y,
                                            double s, double phi_star) {
  const ProxResult p = prox(problem, y, s);
  return {2.0 * problem.smooth().mu() * (problem.phi(p.p_value) - phi_star),
          p.subgradient.squaredNorm()};
}

}  // namespace accel
