#include "accel/algorithms.hpp"

#include "accel/errors.hpp"
#include "accel/proximal.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

namespace accel {
namespace {

struct AlgoName {
  Algorithm algo;
  std::string_view name;
};

constexpr std::array<AlgoName, 8> kAlgoNames{{
    {Algorithm::kGd, "gd"},
    {Algorithm::kNag, "nag"},
    {Algorithm::kNagPhase, "nag-phase"},
    {Algorithm::kMNag, "m-nag"},
    {Algorithm::kFista, "fista"},
    {Algorithm::kMFista, "m-fista"},
    {Algorithm::kNagSc, "nag-sc"},
    {Algorithm::kMNagSc, "m-nag-sc"},
}};

AlgoState advance(const AlgoState& state, Vector x_next, Vector y_next, double s) {
  AlgoState next;
  next.k = state.k + 1;
  next.v = (x_next - state.x) / std::sqrt(s);
  next.x = std::move(x_next);
  next.y = std::move(y_next);
  return next;
}

// Shared tail of the two-step schemes: x' = descent point, y' = x' + w (x' - x).
StepResult momentum_step(const AlgoState& state, Vector x_next, Vector map, double weight,
                         double s) {
  Vector y_next = x_next + weight * (x_next - state.x);
  return {advance(state, std::move(x_next), std::move(y_next), s), std::move(map), std::nullopt};
}

// Comparison step shared by the monotone schemes. Ties accept z.
template <class Objective>
StepResult monotone_step(const AlgoState& state, Vector z, Vector map, double weight,
                         double z_weight, double s, const Objective& objective) {
  const bool accept = objective(z) <= objective(state.x);
  Vector x_next = accept ? z : state.x;
  Vector y_next = x_next + weight * (x_next - state.x) + z_weight * (z - x_next);
  return {advance(state, std::move(x_next), std::move(y_next), s), std::move(map), std::move(z)};
}

}  // namespace

std::string_view to_string(Algorithm algo) {
  for (const auto& entry : kAlgoNames) {
    if (entry.algo == algo) return entry.name;
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (const auto& entry : kAlgoNames) {
    if (entry.name == name) return entry.algo;
  }
  throw ConfigError("unknown algorithm '" + std::string(name) +
                    "' (expected gd, nag, nag-phase, m-nag, fista, m-fista, nag-sc or m-nag-sc)");
}

bool is_monotone(Algorithm algo) {
  return algo == Algorithm::kMNag || algo == Algorithm::kMFista || algo == Algorithm::kMNagSc;
}

bool uses_momentum_r(Algorithm algo) {
  switch (algo) {
    case Algorithm::kNag:
    case Algorithm::kNagPhase:
    case Algorithm::kMNag:
    case Algorithm::kFista:
    case Algorithm::kMFista:
      return true;
    default:
      return false;
  }
}

bool is_proximal(Algorithm algo) {
  return algo == Algorithm::kFista || algo == Algorithm::kMFista;
}

AlgoState AlgoState::initial(const Vector& x0) {
  return {0, x0, x0, Vector::Zero(x0.size())};
}

double nag_momentum(std::int64_t k, double r) {
  const auto kd = static_cast<double>(k);
  return kd / (kd + r + 1.0);
}

double nag_sc_momentum(double mu, double s) {
  const double mu_s = mu * s;
  if (!(mu_s > 0.0) || !(mu_s < 1.0)) {
    throw ParameterError("NAG-SC needs 0 < mu*s < 1, got mu*s = " + std::to_string(mu_s));
  }
  const double root = std::sqrt(mu_s);
  return (1.0 - root) / (1.0 + root);
}

StepResult step_gd(const AlgoState& state, const SmoothOracle& f, double s) {
  Vector grad = f.gradient(state.x);
  Vector x_next = state.x - s * grad;
  Vector y_next = x_next;
  return {advance(state, std::move(x_next), std::move(y_next), s), std::move(grad),
          std::nullopt};
}

StepResult step_nag(const AlgoState& state, const SmoothOracle& f, double s, double r) {
  Vector grad = f.gradient(state.y);
  Vector x_next = state.y - s * grad;
  return momentum_step(state, std::move(x_next), std::move(grad), nag_momentum(state.k, r), s);
}

StepResult step_nag_phase(const AlgoState& state, const SmoothOracle& f, double s, double r) {
  const auto k = static_cast<double>(state.k);
  const double root_s = std::sqrt(s);
  Vector grad = f.gradient(state.y);
  AlgoState next;
  next.k = state.k + 1;
  next.v = state.v - ((r + 1.0) / (k + r)) * state.v - root_s * grad;
  next.x = state.x + root_s * next.v;
  // Position-velocity relation at k + 1: y = x + (k / (k + 1 + r)) sqrt(s) v.
  next.y = next.x + (k / (k + 1.0 + r)) * root_s * next.v;
  return {std::move(next), std::move(grad), std::nullopt};
}

StepResult step_mnag(const AlgoState& state, const SmoothOracle& f, double s, double r) {
  Vector grad = f.gradient(state.y);
  Vector z = state.y - s * grad;
  const auto k = static_cast<double>(state.k);
  return monotone_step(state, std::move(z), std::move(grad), nag_momentum(state.k, r),
                       (k + r) / (k + r + 1.0), s,
                       [&f](const Vector& p) { return f.value(p); });
}

StepResult step_fista(const AlgoState& state, const CompositeObjective& problem, double s,
                      double r) {
  ProxResult p = prox(problem, state.y, s);
  return momentum_step(state, std::move(p.p_value), std::move(p.subgradient),
                       nag_momentum(state.k, r), s);
}

StepResult step_mfista(const AlgoState& state, const CompositeObjective& problem, double s,
                       double r) {
  ProxResult p = prox(problem, state.y, s);
  const auto k = static_cast<double>(state.k);
  return monotone_step(state, std::move(p.p_value), std::move(p.subgradient),
                       nag_momentum(state.k, r), (k + r) / (k + r + 1.0), s,
                       [&problem](const Vector& q) { return problem.phi(q); });
}

StepResult step_nag_sc(const AlgoState& state, const SmoothOracle& f, double s) {
  const double weight = nag_sc_momentum(f.mu(), s);
  Vector grad = f.gradient(state.y);
  Vector x_next = state.y - s * grad;
  return momentum_step(state, std::move(x_next), std::move(grad), weight, s);
}

StepResult step_mnag_sc(const AlgoState& state, const SmoothOracle& f, double s) {
  const double weight = nag_sc_momentum(f.mu(), s);
  Vector grad = f.gradient(state.y);
  Vector z = state.y - s * grad;
  return monotone_step(state, std::move(z), std::move(grad), weight, 1.0, s,
                       [&f](const Vector& p) { return f.value(p); });
}

void validate(const RunParams& params, const CompositeObjective& problem) {
  check_step_size(params.step, problem.smooth().lipschitz());
  if (uses_momentum_r(params.algo) && !(params.momentum_r >= 2.0)) {
    throw ParameterError("momentum parameter r must be at least 2, got " +
                         std::to_string(params.momentum_r));
  }
  if (params.iters <= 0) throw ParameterError("iteration count must be positive");
  if (!is_proximal(params.algo) && problem.regularizer_kind() != RegularizerKind::kZero &&
      problem.l1_weight() != 0.0) {
    throw UnsupportedError(std::string(to_string(params.algo)) +
                           " needs a smooth objective; use fista or m-fista for l1 problems");
  }
}

namespace {

StepResult dispatch(const AlgoState& state, const CompositeObjective& problem,
                    const RunParams& p) {
  const auto& f = problem.smooth();
  switch (p.algo) {
    case Algorithm::kGd:
      return step_gd(state, f, p.step);
    case Algorithm::kNag:
      return step_nag(state, f, p.step, p.momentum_r);
    case Algorithm::kNagPhase:
      return step_nag_phase(state, f, p.step, p.momentum_r);
    case Algorithm::kMNag:
      return step_mnag(state, f, p.step, p.momentum_r);
    case Algorithm::kFista:
      return step_fista(state, problem, p.step, p.momentum_r);
    case Algorithm::kMFista:
      return step_mfista(state, problem, p.step, p.momentum_r);
    case Algorithm::kNagSc:
      return step_nag_sc(state, f, p.step);
    case Algorithm::kMNagSc:
      return step_mnag_sc(state, f, p.step);
  }
  throw UnsupportedError("unhandled algorithm");
}

double objective_at(const CompositeObjective& problem, Algorithm algo, const Vector& x) {
  return is_proximal(algo) ? problem.phi(x) : problem.smooth().value(x);
}

}  // namespace

Trace run(const CompositeObjective& problem, const RunParams& params, const Vector& x0,
          std::string problem_id) {
  if (x0.size() != problem.dim()) {
    throw DimensionError("initial point has dimension " + std::to_string(x0.size()) +
                         " but the problem has dimension " + std::to_string(problem.dim()));
  }
  validate(params, problem);

  Trace trace{params, std::move(problem_id), {}};
  trace.records.reserve(static_cast<std::size_t>(params.iters) + 1);
  AlgoState state = AlgoState::initial(x0);
  for (std::int64_t k = 0; k <= params.iters; ++k) {
    // The final record gets its map (and z) from a step whose successor is dropped.
    StepResult step = dispatch(state, problem, params);
    TraceRecord rec;
    rec.k = state.k;
    rec.x = state.x;
    rec.y = state.y;
    rec.v = state.v;
    rec.z = std::move(step.z);
    rec.objective = objective_at(problem, params.algo, state.x);
    rec.first_order_map = std::move(step.first_order_map);
    trace.records.push_back(std::move(rec));
    state = std::move(step.next);
  }
  return trace;
}

std::optional<std::int64_t> first_hit(const Trace& trace, double f_star, double level) {
  for (const auto& rec : trace.records) {
    if (rec.objective - f_star <= level) return rec.k;
  }
  return std::nullopt;
}

}  // namespace accel
