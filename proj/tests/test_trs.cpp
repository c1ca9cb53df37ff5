#include "test_util.hpp"

#include <ddrt/trs.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace ddrt;
using namespace ddrt::testing;

TEST(Trs, OneDimensionalGrid)
{
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int k = 0; k < 50; ++k) {
    const double A = U(rng), a = U(rng);
    double best = -1e300;
    for (int i = 0; i <= 200000; ++i) {
      const double x = -1.0 + 2.0 * i / 200000.0;
      best = std::max(best, A * x * x + 2.0 * a * x);
    }
    const auto r = trs_maximize(MatrixXd::Constant(1, 1, A), VectorXd::Constant(1, a));
    EXPECT_NEAR(r.value, best, 1e-8);
  }
}

TEST(Trs, InteriorMaximumOfConcaveObjective)
{
  // -x^T x + 2 a^T x with |a| < 1 peaks at x = a
  VectorXd a(2);
  a << 0.3, -0.2;
  const auto r = trs_maximize(-MatrixXd::Identity(2, 2), a);
  EXPECT_TRUE(r.interior);
  EXPECT_LT((r.x - a).norm(), 1e-10);
  EXPECT_NEAR(r.value, a.squaredNorm(), 1e-12);
}

TEST(Trs, HardCase)
{
  // a orthogonal to the top eigenvector: lambda = lambda_max and a null-space component fills the sphere
  MatrixXd A = MatrixXd::Zero(2, 2);
  A(0, 0) = 1.0;
  A(1, 1) = -1.0;
  VectorXd a(2);
  a << 0.0, 0.5;
  const auto r = trs_maximize(A, a);
  EXPECT_TRUE(r.hard_case);
  EXPECT_NEAR(r.x.norm(), 1.0, 1e-10);
  // x2 = a2/(lambda+1) = 0.25, x1^2 = 1 - 0.0625
  EXPECT_NEAR(r.value, (1.0 - 0.0625) - 0.0625 + 2.0 * 0.5 * 0.25, 1e-10);
}

TEST(Trs, RandomInstancesBeatSampling)
{
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const MatrixXd G = random_matrix(4, 4, rng);
    const MatrixXd A = G + G.transpose();
    const VectorXd a = random_vector(4, rng);
    const auto r = trs_maximize(A, a);
    EXPECT_LE(r.x.norm(), 1.0 + 1e-10);
    EXPECT_NEAR(r.value, r.x.dot(A * r.x) + 2.0 * a.dot(r.x), 1e-9);
    // optimality: (lambda I - A) PSD and stationarity
    EXPECT_GE(min_eigenvalue(r.multiplier * MatrixXd::Identity(4, 4) - A), -1e-8);
    EXPECT_LT(((r.multiplier * MatrixXd::Identity(4, 4) - A) * r.x - a).norm(), 1e-8);
    for (int k = 0; k < 2000; ++k) {
      VectorXd x = random_vector(4, rng);
      x /= std::max(1.0, x.norm());
      EXPECT_LE(x.dot(A * x) + 2.0 * a.dot(x), r.value + 1e-9);
    }
  }
}

TEST(Trs, EllipsoidMaximum)
{
  // maximize x1 over x1^2 + 4 x2^2 <= 4  ->  2
  MatrixXd F = MatrixXd::Zero(2, 2);
  F(0, 0) = -1.0;
  F(1, 1) = -4.0;
  const QuadraticForm constraint(4.0, RowVectorXd::Zero(2), F);
  RowVectorXd b = RowVectorXd::Zero(2);
  b(0) = 0.5;
  const QuadraticForm objective(0.0, b, MatrixXd::Zero(2, 2));
  const auto r = maximize_over_ellipsoid(objective, constraint);
  EXPECT_NEAR(r.value, 2.0, 1e-10);
  EXPECT_NEAR(r.argmax(0), 2.0, 1e-8);
}
