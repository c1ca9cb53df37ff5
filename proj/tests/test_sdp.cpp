#include "test_util.hpp"

#include <ddrt/sdp.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace ddrt;

namespace {

// a * z_var + b >= 0 as a 1x1 block
AffineLmi scalar(const std::string & name, int num_vars, int var, double a, double b)
{
  LmiBuilder lb(name, 1, num_vars);
  lb.add(var, 0, 0, a);
  lb.add(-1, 0, 0, b);
  return lb.build();
}

SdpProblem problem(int num_vars, VectorXd cost)
{
  SdpProblem p;
  p.num_vars = num_vars;
  p.cost = std::move(cost);
  return p;
}

}  // namespace

TEST(Sdp, BuilderMirrorsEntries)
{
  LmiBuilder lb("b", 3, 2);
  lb.add(0, 2, 0, 1.5);
  lb.add(-1, 1, 1, 4.0);
  MatrixXd blk(2, 2);
  blk << 1, 2, 2, 3;
  lb.add_block(1, 0, 0, blk);
  const auto lmi = lb.build();
  VectorXd z(2);
  z << 2.0, -1.0;
  const MatrixXd V = lmi.evaluate(z);
  EXPECT_DOUBLE_EQ(V(0, 2), 3.0);
  EXPECT_DOUBLE_EQ(V(2, 0), 3.0);
  EXPECT_DOUBLE_EQ(V(1, 1), 4.0 - 3.0);
  EXPECT_DOUBLE_EQ(V(0, 1), -2.0);
  EXPECT_DOUBLE_EQ(V(1, 0), -2.0);
}

TEST(Sdp, ScalarLowerBound)
{
  auto p = problem(1, VectorXd::Ones(1));
  p.constraints.push_back(scalar("x>=1", 1, 0, 1.0, -1.0));
  const auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::Optimal) << s.message;
  EXPECT_NEAR(s.z(0), 1.0, 1e-7);
  EXPECT_NEAR(s.objective, 1.0, 1e-7);
}

TEST(Sdp, LargestEigenvalue)
{
  std::mt19937_64 rng(1);
  const MatrixXd G = ddrt::testing::random_matrix(5, 5, rng);
  const MatrixXd A = G + G.transpose();
  LmiBuilder lb("tI-A", 5, 1);
  lb.add_block(-1, 0, 0, -A);
  lb.add_block(0, 0, 0, MatrixXd::Identity(5, 5));
  auto p = problem(1, VectorXd::Ones(1));
  p.constraints.push_back(lb.build());
  const auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::Optimal) << s.message;
  EXPECT_NEAR(s.objective, max_eigenvalue(A), 1e-7 * (1.0 + std::abs(max_eigenvalue(A))));
}

TEST(Sdp, SchurComplementGivesSquare)
{
  // min t s.t. [[1, x], [x, t]] >= 0, x >= 2  ->  t = 4
  LmiBuilder lb("schur", 2, 2);
  lb.add(-1, 0, 0, 1.0);
  lb.add(0, 0, 1, 1.0);
  lb.add(1, 1, 1, 1.0);
  VectorXd c(2);
  c << 0.0, 1.0;
  auto p = problem(2, c);
  p.constraints.push_back(lb.build());
  p.constraints.push_back(scalar("x>=2", 2, 0, 1.0, -2.0));
  const auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::Optimal) << s.message;
  EXPECT_NEAR(s.z(1), 4.0, 1e-6);
  EXPECT_NEAR(s.z(0), 2.0, 1e-6);
}

TEST(Sdp, ContradictoryScalarsAreInfeasible)
{
  auto p = problem(1, VectorXd::Ones(1));
  p.constraints.push_back(scalar("x>=1", 1, 0, 1.0, -1.0));
  p.constraints.push_back(scalar("x<=0", 1, 0, -1.0, 0.0));
  EXPECT_EQ(solve(p).status, SdpStatus::Infeasible);
}

TEST(Sdp, InfeasibleMatrixInequality)
{
  // [[x, 1], [1, -x]] >= 0 has no solution (determinant -x^2 - 1)
  LmiBuilder lb("indefinite", 2, 1);
  lb.add(0, 0, 0, 1.0);
  lb.add(0, 1, 1, -1.0);
  lb.add(-1, 0, 1, 1.0);
  auto p = problem(1, VectorXd::Zero(1));
  p.constraints.push_back(lb.build());
  const auto s = solve(p);
  EXPECT_EQ(s.status, SdpStatus::Infeasible) << s.message;
}

TEST(Sdp, UnboundedBelow)
{
  auto p = problem(1, VectorXd::Ones(1));
  p.constraints.push_back(scalar("x<=1", 1, 0, -1.0, 1.0));
  EXPECT_EQ(solve(p).status, SdpStatus::Unbounded);
}

TEST(Sdp, RedundantCopiesDoNotChangeOptimum)
{
  auto p = problem(1, VectorXd::Ones(1));
  p.constraints.push_back(scalar("x>=1", 1, 0, 1.0, -1.0));
  const double base = solve(p).objective;
  for (int k = 0; k < 3; ++k) { p.constraints.push_back(scalar("copy", 1, 0, 1.0, -1.0)); }
  p.constraints.push_back(scalar("looser", 1, 0, 1.0, 5.0));
  const auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_NEAR(s.objective, base, 1e-7);
}

TEST(Sdp, ZeroFaceIsReduced)
{
  // the second diagonal entry is identically zero; x >= 1 enters through the first
  LmiBuilder lb("face", 3, 1);
  lb.add(0, 0, 0, 1.0);
  lb.add(-1, 0, 0, -1.0);
  lb.add(0, 2, 2, 1.0);
  auto p = problem(1, VectorXd::Ones(1));
  p.constraints.push_back(lb.build());
  const auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::Optimal) << s.message;
  EXPECT_NEAR(s.z(0), 1.0, 1e-7);
}

TEST(Sdp, NoConstraintsZeroCostIsOptimal)
{
  const auto s = solve(problem(2, VectorXd::Zero(2)));
  EXPECT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_EQ(solve(problem(1, VectorXd::Ones(1))).status, SdpStatus::Unbounded);
}

TEST(Sdp, VerificationPassAndFail)
{
  auto p = problem(1, VectorXd::Ones(1));
  p.constraints.push_back(scalar("x>=1", 1, 0, 1.0, -1.0));
  EXPECT_TRUE(verify_solution(p, VectorXd::Constant(1, 1.5)).pass);
  const auto bad = verify_solution(p, VectorXd::Constant(1, 0.5));
  EXPECT_FALSE(bad.pass);
  EXPECT_NEAR(bad.min_eigenvalues[0], -0.5, 1e-14);
  EXPECT_THROW(verify_solution(p, VectorXd::Zero(2)), DimensionError);
}

TEST(Sdp, ValidateRejectsMismatchedCost)
{
  auto p = problem(2, VectorXd::Ones(1));
  EXPECT_THROW(p.validate(), DimensionError);
  EXPECT_THROW(solve(p), DimensionError);
}

TEST(Sdp, SdpaExport)
{
  auto p = problem(1, VectorXd::Ones(1));
  p.constraints.push_back(scalar("x>=1", 1, 0, 1.0, -1.0));
  std::ostringstream os;
  write_sdpa(p, os);
  const std::string expected = "* ddrt SDP export: min c^T x s.t. sum_i x_i F_i - (-F0) >= 0\n"
                               "1\n1\n1\n1\n"
                               "0 1 1 1 1\n"
                               "1 1 1 1 1\n";
  EXPECT_EQ(os.str(), expected);
}

TEST(Sdp, StatusNames)
{
  EXPECT_EQ(to_string(SdpStatus::Optimal), "optimal");
  EXPECT_EQ(to_string(SdpStatus::Infeasible), "infeasible");
  EXPECT_EQ(to_string(SdpStatus::Unbounded), "unbounded");
  EXPECT_EQ(to_string(SdpStatus::NumericalFailure), "numerical_failure");
}
