#include "test_util.hpp"

#include <ddrt/linalg.hpp>

#include <gtest/gtest.h>

using namespace ddrt;
using ddrt::testing::random_matrix;

TEST(Linalg, RankOfProductOfThinFactors)
{
  std::mt19937_64 rng(1);
  const MatrixXd A = random_matrix(9, 3, rng) * random_matrix(3, 7, rng);
  EXPECT_EQ(numerical_rank(A), 3);
  EXPECT_EQ(numerical_rank(MatrixXd::Zero(4, 4)), 0);
  EXPECT_EQ(numerical_rank(MatrixXd(0, 3)), 0);
}

TEST(Linalg, NullSpaceIsOrthonormalKernel)
{
  std::mt19937_64 rng(2);
  const MatrixXd A = random_matrix(4, 10, rng);
  const MatrixXd N = null_space(A);
  ASSERT_EQ(N.cols(), 6);
  EXPECT_LT((A * N).norm(), 1e-12);
  EXPECT_LT((N.transpose() * N - MatrixXd::Identity(6, 6)).norm(), 1e-12);
}

TEST(Linalg, NullSpaceOfEmptyRowsIsIdentity)
{
  const MatrixXd N = null_space(MatrixXd(0, 3));
  EXPECT_TRUE(N.isApprox(MatrixXd::Identity(3, 3)));
}

TEST(Linalg, RangeBasisSpansColumns)
{
  std::mt19937_64 rng(3);
  const MatrixXd A = random_matrix(8, 2, rng) * random_matrix(2, 5, rng);
  const MatrixXd Q = range_basis(A);
  ASSERT_EQ(Q.cols(), 2);
  EXPECT_LT(projection_residual(A, Q), 1e-12);
  EXPECT_LT(projection_residual(Q, A), 1e-12);
}

TEST(Linalg, ProjectionResidualDetectsMissingDirection)
{
  MatrixXd A = MatrixXd::Zero(3, 1);
  A(2, 0) = 2.0;
  MatrixXd B = MatrixXd::Zero(3, 2);
  B(0, 0) = 1.0;
  B(1, 1) = 1.0;
  EXPECT_NEAR(projection_residual(A, B), 2.0, 1e-14);
}

TEST(Linalg, Eigenvalues)
{
  MatrixXd S(2, 2);
  S << 2, 1, 1, 2;
  EXPECT_NEAR(min_eigenvalue(S), 1.0, 1e-14);
  EXPECT_NEAR(max_eigenvalue(S), 3.0, 1e-14);
}

TEST(Linalg, SpdInverse)
{
  std::mt19937_64 rng(4);
  const MatrixXd G = random_matrix(5, 5, rng);
  const MatrixXd S = G * G.transpose() + MatrixXd::Identity(5, 5);
  EXPECT_LT((spd_inverse(S) * S - MatrixXd::Identity(5, 5)).norm(), 1e-10);
  MatrixXd N = MatrixXd::Identity(2, 2);
  N(1, 1) = -1.0;
  EXPECT_THROW(spd_inverse(N), FactorizationError);
}

TEST(Linalg, SquareFactorReproducesPsdMatrix)
{
  std::mt19937_64 rng(5);
  const MatrixXd G = random_matrix(6, 2, rng);
  const MatrixXd P = G * G.transpose();
  const MatrixXd L = psd_square_factor(P);
  EXPECT_EQ(L.rows(), 6);
  EXPECT_EQ(L.cols(), 6);
  EXPECT_LT((L.transpose() * L - P).norm(), 1e-10 * P.norm());
}

TEST(Linalg, SquareFactorRejectsIndefinite)
{
  MatrixXd P = MatrixXd::Identity(2, 2);
  P(0, 0) = -1.0;
  EXPECT_THROW(psd_square_factor(P), FactorizationError);
}
