#pragma once

#include "accel/problems.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace accel {

enum class Algorithm { kGd, kNag, kNagPhase, kMNag, kFista, kMFista, kNagSc, kMNagSc };

std::string_view to_string(Algorithm algo);
/// Accepts the CLI spellings: gd, nag, nag-phase, m-nag, fista, m-fista, nag-sc, m-nag-sc.
Algorithm parse_algorithm(std::string_view name);

/// Uses the comparison step, so the objective never increases.
bool is_monotone(Algorithm algo);
/// Takes the momentum parameter r (weight k/(k+r+1)).
bool uses_momentum_r(Algorithm algo);
/// Steps through P_s / G_s instead of the plain gradient.
bool is_proximal(Algorithm algo);

/// Iterate k with position x_k, extrapolated point y_k and velocity
/// v_k = (x_k - x_{k-1}) / sqrt(s).
struct AlgoState {
  std::int64_t k = 0;
  Vector x;
  Vector y;
  Vector v;

  /// x_0 = y_0 and v_0 = 0.
  static AlgoState initial(const Vector& x0);
};

/// Output of one transition. first_order_map and z belong to the input
/// iterate k: the gradient (or G_s) at y_k and, for monotone schemes, z_k.
struct StepResult {
  AlgoState next;
  Vector first_order_map;
  std::optional<Vector> z;
};

StepResult step_gd(const AlgoState& state, const SmoothOracle& f, double s);
StepResult step_nag(const AlgoState& state, const SmoothOracle& f, double s, double r);
StepResult step_nag_phase(const AlgoState& state, const SmoothOracle& f, double s, double r);
StepResult step_mnag(const AlgoState& state, const SmoothOracle& f, double s, double r);
StepResult step_fista(const AlgoState& state, const CompositeObjective& problem, double s,
                      double r);
StepResult step_mfista(const AlgoState& state, const CompositeObjective& problem, double s,
                       double r);
StepResult step_nag_sc(const AlgoState& state, const SmoothOracle& f, double s);
StepResult step_mnag_sc(const AlgoState& state, const SmoothOracle& f, double s);

/// k / (k + r + 1).
double nag_momentum(std::int64_t k, double r);
/// (1 - sqrt(mu s)) / (1 + sqrt(mu s)); throws ParameterError unless 0 < mu s < 1.
double nag_sc_momentum(double mu, double s);

struct RunParams {
  Algorithm algo = Algorithm::kNag;
  double step = 0.0;
  double momentum_r = 2.0;
  std::int64_t iters = 0;
};

/// Checks step in (0, 1/L), r >= 2 where used, iters > 0 and that smooth-only
/// schemes are not handed a non-zero regularizer.
void validate(const RunParams& params, const CompositeObjective& problem);

struct TraceRecord {
  std::int64_t k = 0;
  Vector x;
  Vector y;
  std::optional<Vector> z;
  Vector v;
  /// f(x_k), or Phi(x_k) for the proximal schemes.
  double objective = 0.0;
  /// grad f(y_k) or G_s(y_k), exactly as used by the step from k.
  Vector first_order_map;
};

struct Trace {
  RunParams params;
  std::string problem_id;
  std::vector<TraceRecord> records;
};

/// Runs params.iters steps from x0 and returns iters + 1 records. The last
/// record carries the first-order map at its y (and z for monotone schemes)
/// without taking a further step.
Trace run(const CompositeObjective& problem, const RunParams& params, const Vector& x0,
          std::string problem_id = {});

/// First k with objective - f_star <= level, if any.
std::optional<std::int64_t> first_hit(const Trace& trace, double f_star, double level);

}  // namespace accel
