#include "test_util.hpp"

#include <ddrt/trajectory.hpp>

#include <gtest/gtest.h>

using namespace ddrt;

TEST(Trajectory, RejectsMismatchedLengths)
{
  EXPECT_THROW(TrajectoryData(MatrixXd::Zero(1, 5), MatrixXd::Zero(1, 4)), DimensionError);
}

TEST(Trajectory, StackUnstackRoundTrip)
{
  MatrixXd seq(2, 3);
  seq << 1, 2, 3, 4, 5, 6;
  const VectorXd v = stack(seq);
  VectorXd expected(6);
  expected << 1, 4, 2, 5, 3, 6;
  EXPECT_EQ(v, expected);
  EXPECT_EQ(unstack(v, 2), seq);
  EXPECT_THROW(unstack(v, 4), DimensionError);
}

TEST(Trajectory, HankelEntries)
{
  MatrixXd seq(1, 5);
  seq << 1, 2, 3, 4, 5;
  const MatrixXd H = build_hankel(seq, 3);
  MatrixXd expected(3, 3);
  expected << 1, 2, 3, 2, 3, 4, 3, 4, 5;
  EXPECT_EQ(H, expected);
  EXPECT_THROW(build_hankel(seq, 6), DimensionError);
}

TEST(Trajectory, HankelFromVectorSequenceMatchesMatrixVersion)
{
  std::mt19937_64 rng(1);
  const MatrixXd seq = ddrt::testing::random_matrix(2, 9, rng);
  std::vector<VectorXd> cols;
  for (int k = 0; k < 9; ++k) { cols.push_back(seq.col(k)); }
  EXPECT_EQ(build_hankel(cols, 4), build_hankel(seq, 4));
  EXPECT_EQ(build_hankel(seq, 4).rows(), 8);
  EXPECT_EQ(build_hankel(seq, 4).cols(), 6);
}

TEST(Trajectory, PersistentExcitation)
{
  std::mt19937_64 rng(2);
  const MatrixXd rich = ddrt::testing::random_matrix(2, 40, rng);
  const PeReport ok = check_persistent_excitation(rich, 5);
  EXPECT_TRUE(ok.is_pe);
  EXPECT_EQ(ok.rank, 10);
  EXPECT_EQ(ok.required_rank, 10);
  const MatrixXd constant = MatrixXd::Ones(2, 40);
  const PeReport bad = check_persistent_excitation(constant, 5);
  EXPECT_FALSE(bad.is_pe);
  EXPECT_EQ(bad.rank, 1);
}

TEST(Trajectory, PartitionBlocks)
{
  std::mt19937_64 rng(3);
  const TrajectoryData d(ddrt::testing::random_matrix(3, 30, rng), ddrt::testing::random_matrix(2, 30, rng));
  const HankelBlocks b = partition_blocks(d, 4, 6);
  EXPECT_EQ(b.Up.rows(), 12);
  EXPECT_EQ(b.Yp.rows(), 8);
  EXPECT_EQ(b.Uf.rows(), 18);
  EXPECT_EQ(b.Yf.rows(), 12);
  EXPECT_EQ(b.columns(), 21);
  // first column of U_f is u(T_ini .. T_ini + T_f - 1)
  EXPECT_EQ(b.Uf.col(0), stack(d.inputs().middleCols(4, 6)));
  EXPECT_EQ(b.Yp.col(3), stack(d.outputs().middleCols(3, 4)));
}

TEST(Trajectory, WindowAndAccessors)
{
  std::mt19937_64 rng(4);
  const TrajectoryData d(ddrt::testing::random_matrix(1, 10, rng), ddrt::testing::random_matrix(2, 10, rng));
  const TrajectoryData w = d.window(3, 4);
  EXPECT_EQ(w.length(), 4);
  EXPECT_EQ(w.input(0), d.input(3));
  EXPECT_EQ(w.output(3), d.output(6));
  EXPECT_THROW(d.window(8, 4), DimensionError);
}
