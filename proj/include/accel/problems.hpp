#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace accel {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A differentiable objective in S^1_{mu,L}: mu-strongly convex with an
/// L-Lipschitz gradient. Immutable after construction and safe to share.
class SmoothOracle {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;

  /// Throws InvalidProblem unless 0 < mu <= lipschitz and dim > 0.
  SmoothOracle(Eigen::Index dim, ValueFn value, GradientFn gradient, double mu,
               double lipschitz);

  Eigen::Index dim() const { return dim_; }
  double mu() const { return mu_; }
  double lipschitz() const { return lipschitz_; }

  /// Both throw DimensionError if x.size() != dim().
  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;

 private:
  Eigen::Index dim_;
  ValueFn value_;
  GradientFn gradient_;
  double mu_;
  double lipschitz_;
};

enum class RegularizerKind { kZero, kL1 };

/// Phi = f + g where g is either zero or lambda * ||x||_1.
class CompositeObjective {
 public:
  static CompositeObjective smooth_only(SmoothOracle f);
  static CompositeObjective with_l1(SmoothOracle f, double weight);

  const SmoothOracle& smooth() const { return smooth_; }
  RegularizerKind regularizer_kind() const { return kind_; }
  double l1_weight() const { return l1_weight_; }
  Eigen::Index dim() const { return smooth_.dim(); }

  double regularizer(const Vector& x) const;
  double phi(const Vector& x) const;

 private:
  CompositeObjective(SmoothOracle f, RegularizerKind kind, double weight);

  SmoothOracle smooth_;
  RegularizerKind kind_;
  double l1_weight_;
};

enum class OptimumSource { kAnalytic, kReferenceRun };

struct ReferenceRunInfo {
  std::int64_t iterations = 0;
  double step = 0.0;
};

struct OptimumInfo {
  Vector x_star;
  double f_star = 0.0;
  OptimumSource source = OptimumSource::kAnalytic;
  std::optional<ReferenceRunInfo> reference;
};

struct QuadraticProblem {
  SmoothOracle oracle;
  OptimumInfo optimum;
};

/// f(x) = sum_i c_i x_i^2 with mu = 2 min c, L = 2 max c and x* = 0.
QuadraticProblem make_quadratic(const Vector& coefficients);

struct LassoProblem {
  CompositeObjective objective;
  OptimumInfo optimum;
};

inline constexpr std::int64_t kLassoReferenceIterations = 1'000'000;
inline constexpr double kLassoReferenceStepFraction = 0.9;

/// Phi(x) = 0.5 ||Ax - b||^2 + lambda ||x||_1. mu and L are the extreme
/// eigenvalues of A^T A; the optimum comes from a long ISTA run with step
/// 0.9 / L. Throws InvalidProblem when A is rank deficient.
LassoProblem make_lasso(const Matrix& design, const Vector& target, double l1_weight,
                        std::int64_t reference_iterations = kLassoReferenceIterations);

struct Evaluation {
  double value;
  Vector gradient;
};

Evaluation oracle_eval(const SmoothOracle& oracle, const Vector& x);

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h.
Vector finite_diff_gradient(const SmoothOracle& oracle, const Vector& x, double h);

struct LassoData {
  Matrix design;
  Vector target;
  double l1_weight = 0.0;
};

/// Reads {"A": [[...]], "b": [...], "lambda": x}.
LassoData load_lasso_json(const std::filesystem::path& path);

/// A problem addressable by name, with the optimum used for certification.
struct ResolvedProblem {
  std::string id;
  CompositeObjective objective;
  OptimumInfo optimum;
};

/// Coefficients of the two-dimensional quadratic used in the figure presets.
Vector quad2d_coefficients();

/// Accepts "quad2d", "quad-diag:<c1,c2,...>" and "lasso:<path>".
ResolvedProblem resolve_problem(std::string_view name);

}  // namespace accel
