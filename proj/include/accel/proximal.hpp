#pragma once

#include "accel/problems.hpp"

#include <cstdint>

namespace accel {

/// P_s(x) together with G_s(x) = (x - P_s(x)) / s.
struct ProxResult {
  Vector p_value;
  Vector subgradient;
  double step = 0.0;
};

/// Throws StepSizeError unless 0 < s < 1/L.
void check_step_size(double s, double lipschitz);

/// Componentwise (|u_i| - theta)_+ sgn(u_i). Throws ParameterError on theta < 0.
Vector soft_threshold(const Vector& u, double theta);

/// argmin_y (1/2s)||y - (x - s grad f(x))||^2 + g(y).
Vector prox_value(const CompositeObjective& problem, const Vector& x, double s);

/// G_s(x). For g == 0 this returns grad f(x) itself, not the round-tripped
/// difference quotient.
Vector prox_subgradient(const CompositeObjective& problem, const Vector& x, double s);

/// P_s and G_s from a single gradient evaluation.
ProxResult prox(const CompositeObjective& problem, const Vector& x, double s);

/// Grid-search reference for P_s, one coordinate at a time. The window
/// [u_i - radius, u_i + radius] around the forward step u = x - s grad f(x) is
/// scanned on successively finer grids until the spacing reaches grid_step.
/// A non-positive radius selects the default 10 (1 + |u_i|).
Vector prox_bruteforce(const CompositeObjective& problem, const Vector& x, double s,
                       double radius, double grid_step);

/// Plain proximal-gradient iteration x <- P_s(x) from x0.
Vector ista(const CompositeObjective& problem, const Vector& x0, double s,
            std::int64_t iterations);

}  // namespace accel
