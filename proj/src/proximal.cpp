#include "accel/proximal.hpp"

#include "accel/errors.hpp"

#include <cmath>
#include <string>

namespace accel {
namespace {

// Windows are refined by this factor per level of the grid search.
constexpr int kGridIntervals = 200;

double bruteforce_1d(double center, double s, double lambda, double radius, double grid_step) {
  auto objective = [&](double y) {
    const double d = y - center;
    return d * d / (2.0 * s) + lambda * std::abs(y);
  };
  double lo = center - radius;
  double hi = center + radius;
  for (;;) {
    double h = (hi - lo) / kGridIntervals;
    long n = kGridIntervals;
    const bool last = h <= grid_step;
    if (last) {
      h = grid_step;
      n = static_cast<long>(std::ceil((hi - lo) / h));
    }
    long best = 0;
    double best_value = objective(lo);
    for (long j = 1; j <= n; ++j) {
      const double v = objective(lo + static_cast<double>(j) * h);
      if (v < best_value) {
        best_value = v;
        best = j;
      }
    }
    const double best_y = lo + static_cast<double>(best) * h;
    if (last) return best_y;
    // Convexity puts the minimizer between the neighbours of the best node.
    lo = best_y - h;
    hi = best_y + h;
  }
}

}  // namespace

void check_step_size(double s, double lipschitz) {
  if (!(s > 0.0) || !(s * lipschitz < 1.0)) {
    throw StepSizeError("step size " + std::to_string(s) + " must lie in (0, 1/L) = (0, " +
                        std::to_string(1.0 / lipschitz) + ")");
  }
}

Vector soft_threshold(const Vector& u, double theta) {
  if (!(theta >= 0.0)) throw ParameterError("soft-threshold level must be non-negative");
  Vector out(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double shrunk = std::abs(u[i]) - theta;
    out[i] = shrunk > 0.0 ? std::copysign(shrunk, u[i]) : 0.0;
  }
  return out;
}

ProxResult prox(const CompositeObjective& problem, const Vector& x, double s) {
  check_step_size(s, problem.smooth().lipschitz());
  Vector grad = problem.smooth().gradient(x);
  Vector forward = x - s * grad;
  if (problem.regularizer_kind() == RegularizerKind::kZero) {
    return {std::move(forward), std::move(grad), s};
  }
  Vector p = soft_threshold(forward, problem.l1_weight() * s);
  Vector g = (x - p) / s;
  return {std::move(p), std::move(g), s};
}

Vector prox_value(const CompositeObjective& problem, const Vector& x, double s) {
  return prox(problem, x, s).p_value;
}

Vector prox_subgradient(const CompositeObjective& problem, const Vector& x, double s) {
  return prox(problem, x, s).subgradient;
}

Vector prox_bruteforce(const CompositeObjective& problem, const Vector& x, double s,
                       double radius, double grid_step) {
  if (!(grid_step > 0.0)) throw ParameterError("grid step must be positive");
  check_step_size(s, problem.smooth().lipschitz());
  const double lambda =
      problem.regularizer_kind() == RegularizerKind::kL1 ? problem.l1_weight() : 0.0;
  const Vector forward = x - s * problem.smooth().gradient(x);
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double r = radius > 0.0 ? radius : 10.0 * (1.0 + std::abs(forward[i]));
    out[i] = bruteforce_1d(forward[i], s, lambda, r, grid_step);
  }
  return out;
}

Vector ista(const CompositeObjective& problem, const Vector& x0, double s,
            std::int64_t iterations) {
  check_step_size(s, problem.smooth().lipschitz());
  Vector x = x0;
  for (std::int64_t i = 0; i < iterations; ++i) {
    x = prox(problem, x, s).p_value;
  }
  return x;
}

}  // namespace accel
