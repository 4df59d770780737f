#include "accel/problems.hpp"

#include "accel/errors.hpp"
#include "accel/proximal.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

namespace accel {
namespace {

void check_dim(Eigen::Index expected, const Vector& x) {
  if (x.size() != expected) {
    throw DimensionError("expected a vector of dimension " + std::to_string(expected) +
                         ", got " + std::to_string(x.size()));
  }
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

SmoothOracle::SmoothOracle(Eigen::Index dim, ValueFn value, GradientFn gradient, double mu,
                           double lipschitz)
    : dim_(dim),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      mu_(mu),
      lipschitz_(lipschitz) {
  if (dim_ <= 0) throw InvalidProblem("oracle dimension must be positive");
  if (!(mu_ > 0.0)) throw InvalidProblem("strong convexity modulus mu must be positive");
  if (!(lipschitz_ >= mu_) || !std::isfinite(lipschitz_)) {
    throw InvalidProblem("Lipschitz constant must be finite and at least mu");
  }
}

double SmoothOracle::value(const Vector& x) const {
  check_dim(dim_, x);
  return value_(x);
}

Vector SmoothOracle::gradient(const Vector& x) const {
  check_dim(dim_, x);
  return gradient_(x);
}

CompositeObjective::CompositeObjective(SmoothOracle f, RegularizerKind kind, double weight)
    : smooth_(std::move(f)), kind_(kind), l1_weight_(weight) {}

CompositeObjective CompositeObjective::smooth_only(SmoothOracle f) {
  return CompositeObjective(std::move(f), RegularizerKind::kZero, 0.0);
}

CompositeObjective CompositeObjective::with_l1(SmoothOracle f, double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw InvalidProblem("l1 weight must be a finite non-negative number");
  }
  return CompositeObjective(std::move(f), RegularizerKind::kL1, weight);
}

double CompositeObjective::regularizer(const Vector& x) const {
  if (kind_ == RegularizerKind::kZero) return 0.0;
  return l1_weight_ * x.lpNorm<1>();
}

double CompositeObjective::phi(const Vector& x) const {
  const double f = smooth_.value(x);
  if (kind_ == RegularizerKind::kZero) return f;
  return f + regularizer(x);
}

QuadraticProblem make_quadratic(const Vector& coefficients) {
  if (coefficients.size() == 0) throw InvalidProblem("quadratic needs at least one coefficient");
  for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
    if (!(coefficients[i] > 0.0) || !std::isfinite(coefficients[i])) {
      throw InvalidProblem("quadratic coefficients must be positive and finite");
    }
  }
  const Vector c = coefficients;
  SmoothOracle oracle(
      c.size(), [c](const Vector& x) { return c.dot(x.cwiseProduct(x)); },
      [c](const Vector& x) -> Vector { return 2.0 * c.cwiseProduct(x); },
      2.0 * c.minCoeff(), 2.0 * c.maxCoeff());
  OptimumInfo optimum{Vector::Zero(c.size()), 0.0, OptimumSource::kAnalytic, std::nullopt};
  return {std::move(oracle), std::move(optimum)};
}

LassoProblem make_lasso(const Matrix& design, const Vector& target, double l1_weight,
                        std::int64_t reference_iterations) {
  if (design.rows() != target.size()) {
    throw DimensionError("design has " + std::to_string(design.rows()) +
                         " rows but target has " + std::to_string(target.size()) + " entries");
  }
  if (design.cols() == 0) throw InvalidProblem("design matrix has no columns");
  if (design.rows() < design.cols()) {
    throw InvalidProblem("design matrix cannot have full column rank (fewer rows than columns)");
  }
  if (reference_iterations <= 0) throw ParameterError("reference run needs a positive length");

  const Matrix gram = design.transpose() * design;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw InvalidProblem("eigen-decomposition of A^T A failed");
  const double mu = eig.eigenvalues().minCoeff();
  const double lipschitz = eig.eigenvalues().maxCoeff();
  if (!(mu > 1e-12 * lipschitz)) {
    throw InvalidProblem("design matrix is rank deficient; f is not strongly convex");
  }

  const Matrix a = design;
  const Vector b = target;
  SmoothOracle f(
      a.cols(),
      [a, b](const Vector& x) { return 0.5 * (a * x - b).squaredNorm(); },
      [a, b](const Vector& x) -> Vector { return a.transpose() * (a * x - b); }, mu, lipschitz);
  auto objective = CompositeObjective::with_l1(std::move(f), l1_weight);

  const double step = kLassoReferenceStepFraction / lipschitz;
  Vector x_star = ista(objective, Vector::Zero(a.cols()), step, reference_iterations);
  const double phi_star = objective.phi(x_star);
  OptimumInfo optimum{std::move(x_star), phi_star, OptimumSource::kReferenceRun,
                      ReferenceRunInfo{reference_iterations, step}};
  return {std::move(objective), std::move(optimum)};
}

Evaluation oracle_eval(const SmoothOracle& oracle, const Vector& x) {
  return {oracle.value(x), oracle.gradient(x)};
}

Vector finite_diff_gradient(const SmoothOracle& oracle, const Vector& x, double h) {
  if (!(h > 0.0)) throw ParameterError("finite-difference step must be positive");
  check_dim(oracle.dim(), x);
  Vector grad(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = oracle.value(probe);
    probe[i] = x[i] - h;
    const double down = oracle.value(probe);
    probe[i] = x[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

LassoData load_lasso_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lasso file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
    const auto rows = doc.at("A").get<std::vector<std::vector<double>>>();
    const auto b = doc.at("b").get<std::vector<double>>();
    const double lambda = doc.at("lambda").get<double>();
    if (rows.empty()) throw ConfigError("lasso file " + path.string() + ": A is empty");
    LassoData data;
    data.design.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.front().size()) {
        throw ConfigError("lasso file " + path.string() + ": ragged rows in A");
      }
      for (std::size_t j = 0; j < rows[i].size(); ++j) {
        data.design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
      }
    }
    data.target = Eigen::Map<const Vector>(b.data(), static_cast<Eigen::Index>(b.size()));
    data.l1_weight = lambda;
    return data;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed lasso file " + path.string() + ": " + e.what());
  }
}

Vector quad2d_coefficients() { return Vector{{5e-3, 1.0}}; }

ResolvedProblem resolve_problem(std::string_view name) {
  constexpr std::string_view kDiag = "quad-diag:";
  constexpr std::string_view kLasso = "lasso:";

  if (name == "quad2d") {
    auto q = make_quadratic(quad2d_coefficients());
    return {std::string(name), CompositeObjective::smooth_only(std::move(q.oracle)),
            std::move(q.optimum)};
  }
  if (name.starts_with(kDiag)) {
    std::vector<double> coefficients;
    std::string_view rest = name.substr(kDiag.size());
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      coefficients.push_back(parse_double(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (coefficients.empty()) throw ConfigError("quad-diag needs at least one coefficient");
    auto q = make_quadratic(Eigen::Map<const Vector>(
        coefficients.data(), static_cast<Eigen::Index>(coefficients.size())));
    return {std::string(name), CompositeObjective::smooth_only(std::move(q.oracle)),
            std::move(q.optimum)};
  }
  if (name.starts_with(kLasso)) {
    const auto data = load_lasso_json(std::filesystem::path(name.substr(kLasso.size())));
    auto lasso = make_lasso(data.design, data.target, data.l1_weight);
    return {std::string(name), std::move(lasso.objective), std::move(lasso.optimum)};
  }
  throw ConfigError("unknown problem '" + std::string(name) +
                    "' (expected quad2d, quad-diag:<c1,...> or lasso:<path>)");
}

}  // namespace accel
