#include "test_util.hpp"

#include <ddrt/noise_param.hpp>
#include <ddrt/plant.hpp>
#include <ddrt/predictor.hpp>

#include <gtest/gtest.h>

using namespace ddrt;
using namespace ddrt::testing;

namespace {

struct Fixture
{
  StateSpacePlant plant;
  HankelBlocks blocks;
  VectorXd u_ini, y_ini, x_after;
};

Fixture make(std::uint64_t seed, int n = 3, int m = 2, int p = 2, int T_ini = 4, int T_f = 5)
{
  std::mt19937_64 rng(seed);
  auto pl = random_plant(n, m, p, rng);
  const int T_d = (m + 1) * (T_ini + T_f + n) + 10;
  const auto hist = generate_historical(pl, T_d, {}, seed + 100);
  const MatrixXd u_ini = random_matrix(m, T_ini, rng);
  const auto sim = simulate(pl, random_vector(n, rng), u_ini);
  return {pl, partition_blocks(hist.data, T_ini, T_f), stack(u_ini), stack(sim.y), sim.x_final};
}

}  // namespace

TEST(Predictor, MinimumNormInitialSolution)
{
  const auto f = make(1);
  const VectorXd g = compute_g_ini_star(f.blocks.Up, f.u_ini);
  EXPECT_LT((f.blocks.Up * g - f.u_ini).norm(), 1e-10);
  // minimum norm: orthogonal to the kernel
  EXPECT_LT((kernel_basis(f.blocks.Up).transpose() * g).norm(), 1e-10);
}

TEST(Predictor, RankDeficientInputThrows)
{
  HankelBlocks b;
  b.Up = MatrixXd::Ones(3, 6);
  EXPECT_THROW(compute_g_ini_star(b.Up, VectorXd::Ones(3)), RankError);
}

TEST(Predictor, LambdaSelectionHasFullRowRank)
{
  const auto f = make(2);
  const auto sel = select_lambda_rows(f.blocks);
  EXPECT_EQ(numerical_rank(sel.lambda), sel.lambda.rows());
  EXPECT_EQ(static_cast<int>(sel.selected.size() + sel.complement.size()), f.blocks.Yp.rows());
  // the lag-many output rows carry the state
  EXPECT_EQ(static_cast<int>(sel.selected.size()), f.plant.n());
}

TEST(Predictor, NoiselessPredictionMatchesPlant)
{
  const auto f = make(3);
  const MatrixXd M = reduced_noise_basis(f.blocks.Up, f.blocks.Yp);
  const auto ops = compute_predictor_operators(f.blocks, f.u_ini, f.y_ini, M);
  // exact g_w: Y_p (g* + M g_w) = y_ini
  const VectorXd g_w = (f.blocks.Yp * M).colPivHouseholderQr().solve(ops.w0);
  std::mt19937_64 rng(5);
  const MatrixXd u = random_matrix(2, 5, rng);
  const VectorXd truth = stack(simulate(f.plant, f.x_after, u).y);
  EXPECT_LT((predict(ops, stack(u), g_w) - truth).norm(), 1e-8 * (1.0 + truth.norm()));
  EXPECT_LT((simulate_data_driven(f.blocks, f.u_ini, f.y_ini, stack(u)) - truth).norm(), 1e-8 * (1.0 + truth.norm()));
}

TEST(Predictor, InputMapIsMarkovToeplitz)
{
  const auto f = make(4);
  const auto ops = compute_predictor_operators(f.blocks, f.u_ini, f.y_ini, reduced_noise_basis(f.blocks.Up, f.blocks.Yp));
  EXPECT_LT((ops.B_u - markov_toeplitz(f.plant, 5)).norm(), 1e-8);
  EXPECT_LT((ops.B_w - ops.B_ini * ops.M).norm(), 1e-12);
}

TEST(Predictor, InconsistentRecentDataIsRejected)
{
  const auto f = make(5);
  VectorXd y_bad = f.y_ini;
  y_bad(0) += 1.0;
  EXPECT_THROW(simulate_data_driven(f.blocks, f.u_ini, y_bad, VectorXd::Zero(10)), FeasibilityError);
  EXPECT_THROW(predict(compute_predictor_operators(f.blocks, f.u_ini, f.y_ini, reduced_noise_basis(f.blocks.Up, f.blocks.Yp)),
                       VectorXd::Zero(3), VectorXd::Zero(3)),
               DimensionError);
}
