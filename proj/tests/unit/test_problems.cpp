#include "accel/errors.hpp"
#include "accel/inequalities.hpp"
#include "accel/problems.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

using namespace accel;
using testutil::vec;

TEST(Quadratic, Quad2dAtOnes) {
  const auto q = testutil::quad2d();
  const auto e = oracle_eval(q.oracle, vec({1, 1}));
  EXPECT_DOUBLE_EQ(e.value, 1.005);
  EXPECT_DOUBLE_EQ(e.gradient[0], 0.01);
  EXPECT_DOUBLE_EQ(e.gradient[1], 2.0);
  EXPECT_DOUBLE_EQ(q.oracle.mu(), 0.01);
  EXPECT_DOUBLE_EQ(q.oracle.lipschitz(), 2.0);
}

TEST(Quadratic, MinimizerOfOneDimensional) {
  const auto q = make_quadratic(vec({1}));
  const auto e = oracle_eval(q.oracle, vec({0}));
  EXPECT_EQ(e.value, 0.0);
  EXPECT_EQ(e.gradient[0], 0.0);
}

TEST(Quadratic, DirectEvaluation) {
  const auto q = make_quadratic(vec({2, 3}));
  const auto e = oracle_eval(q.oracle, vec({1, -1}));
  EXPECT_DOUBLE_EQ(e.value, 5.0);
  EXPECT_DOUBLE_EQ(e.gradient[0], 4.0);
  EXPECT_DOUBLE_EQ(e.gradient[1], -6.0);
  const auto e2 = oracle_eval(make_quadratic(vec({1})).oracle, vec({-2}));
  EXPECT_DOUBLE_EQ(e2.value, 4.0);
  EXPECT_DOUBLE_EQ(e2.gradient[0], -4.0);
}

TEST(Quadratic, AnalyticOptimum) {
  const auto q = make_quadratic(vec({0.3, 2, 7}));
  EXPECT_EQ(q.optimum.source, OptimumSource::kAnalytic);
  EXPECT_EQ(q.oracle.gradient(q.optimum.x_star).norm(), 0.0);
  EXPECT_EQ(q.oracle.value(q.optimum.x_star), q.optimum.f_star);
}

TEST(Quadratic, RejectsNonPositiveCoefficient) {
  EXPECT_THROW(make_quadratic(vec({1, 0})), InvalidProblem);
  EXPECT_THROW(make_quadratic(vec({-1})), InvalidProblem);
}

TEST(Oracle, DimensionMismatch) {
  const auto q = testutil::quad2d();
  EXPECT_THROW(oracle_eval(q.oracle, vec({1, 2, 3})), DimensionError);
  EXPECT_THROW(q.oracle.gradient(vec({1})), DimensionError);
}

TEST(Oracle, RejectsBadModuli) {
  auto value = [](const Vector& x) { return x.squaredNorm(); };
  auto grad = [](const Vector& x) -> Vector { return 2 * x; };
  EXPECT_THROW(SmoothOracle(1, value, grad, 0.0, 1.0), InvalidProblem);
  EXPECT_THROW(SmoothOracle(1, value, grad, 2.0, 1.0), InvalidProblem);
}

TEST(FiniteDiff, Examples) {
  const auto q1 = make_quadratic(vec({1}));
  EXPECT_NEAR(finite_diff_gradient(q1.oracle, vec({1}), 1e-5)[0], 2.0, 1e-8);
  EXPECT_NEAR(finite_diff_gradient(q1.oracle, vec({0}), 1e-5)[0], 0.0, 1e-8);
  const auto q2 = make_quadratic(vec({2, 3}));
  const Vector g = finite_diff_gradient(q2.oracle, vec({1, -1}), 1e-5);
  EXPECT_NEAR(g[0], 4.0, 1e-7);
  EXPECT_NEAR(g[1], -6.0, 1e-7);
}

TEST(FiniteDiff, MatchesGradientOnRandomPoints) {
  std::mt19937_64 rng(11);
  const auto lasso = make_lasso(testutil::random_design(rng, 4), testutil::random_vector(rng, 4, 2),
                                0.0, 1000);
  const SmoothOracle oracles[] = {testutil::quad2d().oracle,
                                  make_quadratic(vec({0.5, 1.5, 4})).oracle,
                                  lasso.objective.smooth()};
  for (const auto& f : oracles) {
    for (int i = 0; i < 100; ++i) {
      Vector x = testutil::random_vector(rng, f.dim(), 10.0);
      if (x.norm() > 10.0) x *= 10.0 / x.norm();
      const Vector g = f.gradient(x);
      EXPECT_LE((finite_diff_gradient(f, x, 1e-5) - g).norm(), 1e-6 * (1 + g.norm()));
    }
  }
}

TEST(Quadratic, ModuliAreTightAlongAxes) {
  const auto q = make_quadratic(vec({0.25, 3}));
  const Vector x = Vector::Zero(2);
  // Flattest axis attains mu, steepest attains L.
  const auto sc = strong_convexity(q.oracle, x, vec({1, 0}));
  EXPECT_NEAR(sc.slack(), 0.0, 1e-15);
  const auto lip = gradient_lipschitz(q.oracle, x, vec({0, 1}));
  EXPECT_NEAR(lip.slack(), 0.0, 1e-15);
}

TEST(Lasso, IdentityDesignSoftThresholds) {
  const auto p = make_lasso(Matrix::Identity(2, 2), vec({3, -3}), 1.0, 20000);
  EXPECT_EQ(p.optimum.source, OptimumSource::kReferenceRun);
  ASSERT_TRUE(p.optimum.reference.has_value());
  EXPECT_GT(p.optimum.reference->iterations, 0);
  EXPECT_NEAR(p.optimum.x_star[0], 2.0, 1e-12);
  EXPECT_NEAR(p.optimum.x_star[1], -2.0, 1e-12);
  // 0.5 * (1 + 1) + 1 * (2 + 2)
  EXPECT_NEAR(p.optimum.f_star, 5.0, 1e-12);
}

TEST(Lasso, ZeroData) {
  const auto p = make_lasso(Matrix::Identity(1, 1), vec({0}), 1.0, 1000);
  EXPECT_NEAR(p.optimum.x_star[0], 0.0, 1e-14);
  EXPECT_NEAR(p.optimum.f_star, 0.0, 1e-14);
}

TEST(Lasso, LeastSquaresWhenWeightIsZero) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1;
  a(1, 1) = 2;
  const auto p = make_lasso(a, vec({1, 1}), 0.0, 20000);
  EXPECT_NEAR(p.optimum.x_star[0], 1.0, 1e-10);
  EXPECT_NEAR(p.optimum.x_star[1], 0.5, 1e-10);
  EXPECT_NEAR(p.optimum.f_star, 0.0, 1e-14);
  EXPECT_DOUBLE_EQ(p.objective.smooth().mu(), 1.0);
  EXPECT_DOUBLE_EQ(p.objective.smooth().lipschitz(), 4.0);
}

TEST(Lasso, RankDeficientRejected) {
  Matrix a(2, 2);
  a << 1, 2, 2, 4;
  EXPECT_THROW(make_lasso(a, vec({1, 1}), 0.1, 10), InvalidProblem);
}

TEST(Lasso, PhiIsSmoothPlusWeightedL1) {
  const auto p = make_lasso(Matrix::Identity(2, 2), vec({3, -3}), 1.5, 10);
  const Vector x = vec({0.5, -2});
  EXPECT_DOUBLE_EQ(p.objective.phi(x), p.objective.smooth().value(x) + 1.5 * 2.5);
  const auto smooth = CompositeObjective::smooth_only(p.objective.smooth());
  EXPECT_EQ(smooth.phi(x), smooth.smooth().value(x));
}

TEST(Resolve, NamedProblems) {
  const auto q = resolve_problem("quad2d");
  EXPECT_EQ(q.objective.dim(), 2);
  EXPECT_DOUBLE_EQ(q.objective.smooth().lipschitz(), 2.0);
  const auto d = resolve_problem("quad-diag:1,2,3");
  EXPECT_EQ(d.objective.dim(), 3);
  EXPECT_DOUBLE_EQ(d.objective.smooth().mu(), 2.0);
  const auto l = resolve_problem(std::string("lasso:") + ACCEL_DATA_DIR + "/lasso5.json");
  EXPECT_EQ(l.objective.dim(), 5);
  EXPECT_EQ(l.objective.regularizer_kind(), RegularizerKind::kL1);
  EXPECT_THROW(resolve_problem("rosenbrock"), ConfigError);
  EXPECT_THROW(resolve_problem("lasso:/nonexistent/file.json"), IoError);
}

// Sampled inequality suites on a quadratic and a least-squares problem.
class SmoothInequalities : public ::testing::TestWithParam<int> {};

TEST_P(SmoothInequalities, HoldOnRandomSamples) {
  std::mt19937_64 rng(100 + GetParam());
  SmoothOracle f = testutil::quad2d().oracle;
  double f_star = 0.0;
  if (GetParam() == 1) {
    const auto p = make_lasso(testutil::random_design(rng, 3), testutil::random_vector(rng, 3, 2),
                              0.0, 200000);
    f = p.objective.smooth();
    f_star = p.optimum.f_star;
  }
  std::uniform_real_distribution<double> frac(1e-3, 1.0 - 1e-3);
  for (int i = 0; i < 100; ++i) {
    const Vector x = testutil::random_vector(rng, f.dim(), 5);
    const Vector y = testutil::random_vector(rng, f.dim(), 5);
    const double s = frac(rng) / f.lipschitz();
    EXPECT_TRUE(strong_convexity(f, x, y).holds());
    EXPECT_TRUE(gradient_lipschitz(f, x, y).holds());
    EXPECT_TRUE(fundamental_inequality(f, x, y, s).holds());
    EXPECT_TRUE(gradient_dominance(f, y, s, f_star).holds());
  }
}

INSTANTIATE_TEST_SUITE_P(Problems, SmoothInequalities, ::testing::Values(0, 1));

TEST(Inequalities, GradientAtOtherEndpointIsNotALowerBound) {
  // Swapping grad f(x) for grad f(y) in the strong convexity inequality breaks it.
  const auto q = testutil::quad2d();
  const Vector x = vec({0, 0});
  const Vector y = vec({1, 1});
  const double lhs = q.oracle.value(x) + q.oracle.gradient(y).dot(y - x) +
                     0.5 * q.oracle.mu() * (y - x).squaredNorm();
  EXPECT_GT(lhs, q.oracle.value(y));
  EXPECT_TRUE(strong_convexity(q.oracle, x, y).holds());
}

TEST(Inequalities, HoldsUsesRelativeSlack) {
  EXPECT_TRUE((InequalityCheck{1.0 + 1e-10, 1.0}).holds());
  EXPECT_FALSE((InequalityCheck{1.0 + 1e-6, 1.0}).holds());
}
