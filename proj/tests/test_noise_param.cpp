#include "test_util.hpp"

#include <ddrt/noise_param.hpp>
#include <ddrt/plant.hpp>

#include <gtest/gtest.h>

using namespace ddrt;
using namespace ddrt::testing;

namespace {

struct Data
{
  StateSpacePlant plant;
  HankelBlocks blocks;
  VectorXd u_ini, y_ini;
};

Data make(std::uint64_t seed, int n = 3, int m = 2, int p = 2, int T_ini = 4, int T_f = 3)
{
  std::mt19937_64 rng(seed);
  auto pl = random_plant(n, m, p, rng);
  const int T_d = (m + 1) * (T_ini + T_f + n) + 8;
  const auto hist = generate_historical(pl, T_d, {}, seed + 7);
  const MatrixXd u_ini = random_matrix(m, T_ini, rng);
  const MatrixXd y_ini = simulate(pl, random_vector(n, rng), u_ini).y + 0.01 * random_matrix(p, T_ini, rng);
  return {pl, partition_blocks(hist.data, T_ini, T_f), stack(u_ini), stack(y_ini)};
}

}  // namespace

TEST(NoiseParam, ReducedBasisDimensionEqualsStateDimension)
{
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const auto d = make(s);
    const MatrixXd M = reduced_noise_basis(d.blocks.Up, d.blocks.Yp);
    EXPECT_EQ(M.cols(), d.plant.n());
    EXPECT_LT((d.blocks.Up * M).norm(), 1e-9);
    EXPECT_LT((M.transpose() * M - MatrixXd::Identity(M.cols(), M.cols())).norm(), 1e-10);
  }
}

TEST(NoiseParam, ReducedAndRedundantNoiseSetsCoincide)
{
  const auto d = make(6);
  const MatrixXd N = null_space(d.blocks.Up);
  const MatrixXd M = reduced_noise_basis(d.blocks.Up, d.blocks.Yp);
  EXPECT_GT(N.cols(), M.cols());
  EXPECT_LT(projection_residual(d.blocks.Yp * N, d.blocks.Yp * M), 1e-8);
  EXPECT_LT(projection_residual(d.blocks.Yp * M, d.blocks.Yp * N), 1e-8);
}

TEST(NoiseParam, ConstraintFormEqualsNoiseLawOnReconstructedNoise)
{
  const auto d = make(7);
  const MatrixXd M = reduced_noise_basis(d.blocks.Up, d.blocks.Yp);
  const auto ops = compute_predictor_operators(d.blocks, d.u_ini, d.y_ini, M);
  const QuadraticForm Phi = QuadraticForm::energy_bound(0.5, d.y_ini.size());
  const auto np = noise_parameterization(Phi, d.blocks.Yp, ops);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 50; ++k) {
    const VectorXd g_w = random_vector(np.n_free, rng);
    const VectorXd w = d.y_ini - d.blocks.Yp * (ops.g_ini_star + M * g_w);
    EXPECT_NEAR(np.constraint_forms[0].evaluate(g_w), Phi.evaluate(w), 1e-10 * (1.0 + w.squaredNorm()));
    EXPECT_LT((np.trajectory(g_w) - w).norm(), 1e-10);
  }
}

TEST(NoiseParam, UnboundedLawIsRejected)
{
  const auto d = make(8);
  const auto ops = compute_predictor_operators(d.blocks, d.u_ini, d.y_ini, reduced_noise_basis(d.blocks.Up, d.blocks.Yp));
  const QuadraticForm flat(1.0, RowVectorXd::Zero(d.y_ini.size()), MatrixXd::Zero(d.y_ini.size(), d.y_ini.size()));
  EXPECT_THROW(noise_parameterization(flat, d.blocks.Yp, ops), DimensionError);
}

TEST(NoiseParam, LiftDimensionsAndReconstruction)
{
  const auto d = make(9);
  const int T_f = 3, m = 2, T_ini = 4;
  const auto lift = disturbance_lift(d.blocks.Up, d.blocks.Yp, d.u_ini, d.y_ini, T_f, m);
  EXPECT_EQ(lift.n_d, d.plant.n() + T_ini * m);
  EXPECT_EQ(lift.n_free(), lift.n_d + T_f * m);
  const QuadraticForm Phi = QuadraticForm::energy_bound(0.3, d.y_ini.size());
  const QuadraticForm Phi_d = QuadraticForm::energy_bound(0.2, (T_ini + T_f) * m);
  const auto forms = lift_quadratic_constraints(Phi, Phi_d, lift);
  std::mt19937_64 rng(2);
  for (int k = 0; k < 50; ++k) {
    const VectorXd gbar = random_vector(lift.n_free(), rng);
    const VectorXd g = lift.M_d * lift.g_w(gbar);
    const VectorXd w = d.y_ini - d.blocks.Yp * g;
    const VectorXd d_ini = d.u_ini - d.blocks.Up * g;
    VectorXd dbar(d_ini.size() + T_f * m);
    dbar << d_ini, lift.d(gbar);
    EXPECT_LT((lift.w(gbar) - w).norm(), 1e-10 * (1.0 + w.norm()));
    EXPECT_LT((lift.d_bar(gbar) - dbar).norm(), 1e-10 * (1.0 + dbar.norm()));
    EXPECT_NEAR(forms.noise.evaluate(gbar), Phi.evaluate(w), 1e-9 * (1.0 + w.squaredNorm()));
    EXPECT_NEAR(forms.disturbance.evaluate(gbar), Phi_d.evaluate(dbar), 1e-9 * (1.0 + dbar.squaredNorm()));
  }
}
