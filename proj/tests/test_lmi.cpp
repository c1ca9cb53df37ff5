#include "instance.hpp"

#include <ddrt/controller.hpp>
#include <ddrt/lmi.hpp>
#include <ddrt/noise_param.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace ddrt;
using namespace ddrt::testing;

namespace {

InputQuadraticForm random_input_form(int nu, int nx, std::mt19937_64 & rng, bool gamma)
{
  InputQuadraticForm f;
  const MatrixXd G = random_matrix(nu, nu, rng);
  f.c0 = 1.0;
  f.c1 = random_vector(nu, rng);
  f.C2 = -(G * G.transpose() + 0.1 * MatrixXd::Identity(nu, nu));
  f.b0 = random_vector(nx, rng).transpose();
  f.B1 = random_matrix(nu, nx, rng);
  const MatrixXd H = random_matrix(nx, nx, rng);
  f.F = -(H * H.transpose());
  f.gamma_coef = gamma ? 1.0 : 0.0;
  return f;
}

MatrixXd schur_complement(const MatrixXd & Z, int k)
{
  const MatrixXd Z11 = Z.topLeftCorner(k, k);
  const MatrixXd Z12 = Z.topRightCorner(k, Z.cols() - k);
  return Z.bottomRightCorner(Z.rows() - k, Z.cols() - k) - Z12.transpose() * Z11.ldlt().solve(Z12);
}

}  // namespace

TEST(Lmi, ScalarSchurEmbedding)
{
  // gamma - u^2 >= 0  <->  [[1, u], [u, gamma]] >= 0
  InputQuadraticForm f;
  f.c1 = VectorXd::Zero(1);
  f.C2 = -MatrixXd::Identity(1, 1);
  f.b0 = RowVectorXd(0);
  f.B1 = MatrixXd(1, 0);
  f.F = MatrixXd(0, 0);
  f.gamma_coef = 1.0;
  const auto lmi = schur_embed("s", f, 2, 0, 1, {}, SchurStyle::Inverse);
  VectorXd z(2);
  z << 0.7, 0.3;
  MatrixXd expected(2, 2);
  expected << 1.0, 0.7, 0.7, 0.3;
  EXPECT_LT((lmi.evaluate(z) - expected).norm(), 1e-14);
}

TEST(Lmi, SchurComplementRecoversForm)
{
  std::mt19937_64 rng(1);
  const int nu = 3, nx = 4;
  for (SchurStyle style : {SchurStyle::Inverse, SchurStyle::Identity}) {
    const auto f = random_input_form(nu, nx, rng, true);
    const QuadraticForm Phi = QuadraticForm::energy_bound(2.0, nx);
    const Multiplier mult{nu + 1, &Phi};
    const auto lmi = schur_embed("t", f, nu + 2, 0, nu, std::span<const Multiplier>(&mult, 1), style);
    EXPECT_EQ(lmi.dim(), nu + 1 + nx);
    for (int k = 0; k < 10; ++k) {
      const VectorXd u = random_vector(nu, rng);
      const double gamma = 3.0 * random_vector(1, rng)(0);
      const double alpha = std::abs(random_vector(1, rng)(0));
      VectorXd z(nu + 2);
      z << u, gamma, alpha;
      const MatrixXd target = (f.at(u, gamma) + Phi * (-alpha)).matrix();
      EXPECT_LT((schur_complement(lmi.evaluate(z), nu) - target).norm(), 1e-9 * (1.0 + target.norm()));
    }
  }
}

TEST(Lmi, SchurRejectsIndefiniteDeficit)
{
  std::mt19937_64 rng(2);
  auto f = random_input_form(2, 2, rng, false);
  f.C2 = MatrixXd::Identity(2, 2);
  EXPECT_THROW(schur_embed("bad", f, 2, 0, -1, {}, SchurStyle::Inverse), FactorizationError);
  EXPECT_THROW(schur_embed("bad", f, 2, 0, -1, {}, SchurStyle::Identity), FactorizationError);
}

TEST(Lmi, SplitRoundTrip)
{
  std::mt19937_64 rng(3);
  const MatrixXd G = random_matrix(5, 5, rng);
  const QuadraticForm joint(0.4, random_vector(5, rng).transpose(), -(G * G.transpose()));
  const auto f = InputQuadraticForm::split(joint, 2);
  for (int k = 0; k < 10; ++k) {
    const VectorXd u = random_vector(2, rng);
    const VectorXd x = random_vector(3, rng);
    VectorXd ux(5);
    ux << u, x;
    EXPECT_NEAR(f.at(u).evaluate(x), joint.evaluate(ux), 1e-10);
  }
}

TEST(Lmi, QgEqualsGammaMinusTrackingError)
{
  auto inst = make_instance(4, 3, 2, 2, 4, 5);
  const auto blocks = partition_blocks(inst.hist, inst.T_ini, inst.prob.T_f);
  const auto ops = compute_predictor_operators(blocks, inst.u_ini, inst.y_ini, reduced_noise_basis(blocks.Up, blocks.Yp));
  const auto qa = assemble_Qg(ops, inst.prob);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const VectorXd u = random_vector(10, rng);
    const VectorXd g_w = random_vector(ops.n_w(), rng);
    const double gamma = 10.0 * random_vector(1, rng)(0);
    const double expect = gamma - lqte(u, predict(ops, u, g_w), inst.prob);
    EXPECT_NEAR(qa.Qg.at(u, gamma).evaluate(g_w), expect, 1e-9 * (1.0 + std::abs(expect)));
  }
  // deficit -C2 = R_bar + B_u^T Q_bar B_u
  EXPECT_LT((-qa.Qg.C2 - qa.S).norm(), 1e-10 * qa.S.norm());
  EXPECT_LT((qa.S - (inst.prob.Rbar() + ops.B_u.transpose() * inst.prob.Qbar() * ops.B_u)).norm(), 1e-10 * qa.S.norm());
}

TEST(Lmi, AffinePartIsAffine)
{
  auto inst = make_instance(6, 3, 1, 2, 4, 4);
  const auto blocks = partition_blocks(inst.hist, inst.T_ini, inst.prob.T_f);
  const auto ops = compute_predictor_operators(blocks, inst.u_ini, inst.y_ini, reduced_noise_basis(blocks.Up, blocks.Yp));
  const auto qa = assemble_Qg(ops, inst.prob);
  std::mt19937_64 rng(7);
  const VectorXd u1 = random_vector(4, rng), u2 = random_vector(4, rng);
  const double t = 0.3;
  const MatrixXd mix = qa.Qg.affine_at(t * u1 + (1 - t) * u2, t * 2.0 + (1 - t) * 5.0).matrix();
  const MatrixXd comb = t * qa.Qg.affine_at(u1, 2.0).matrix() + (1 - t) * qa.Qg.affine_at(u2, 5.0).matrix();
  EXPECT_LT((mix - comb).norm(), 1e-10 * (1.0 + comb.norm()));
}

TEST(Lmi, AssembledConstraintsAreAffineInDecisionVariables)
{
  auto inst = make_instance(8, 3, 2, 1, 4, 4);
  inst.prob.input_form = QuadraticForm::energy_bound(4.0, 8);
  inst.prob.output_form = QuadraticForm::energy_bound(20.0, 4);
  const auto blocks = partition_blocks(inst.hist, inst.T_ini, inst.prob.T_f);
  const auto ops = compute_predictor_operators(blocks, inst.u_ini, inst.y_ini, reduced_noise_basis(blocks.Up, blocks.Yp));
  const auto np = noise_parameterization(inst.prob.noise_law, blocks.Yp, ops);
  const auto ap = assemble_theorem1(ops, inst.prob, np.constraint_forms[0]);
  const int nw = ops.n_w();
  ASSERT_EQ(ap.certificate_sizes.size(), 3u);
  EXPECT_EQ(ap.certificate_sizes[0], 8 + 1 + nw);
  EXPECT_EQ(ap.certificate_sizes[1], 8 + 1);
  EXPECT_EQ(ap.certificate_sizes[2], 8 + 1 + nw);
  EXPECT_EQ(ap.layout.nu, 8);
  EXPECT_EQ(ap.layout.gamma, 8);
  EXPECT_EQ(ap.layout.alpha.size(), 2u);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 10; ++k) {
    const VectorXd z1 = random_vector(ap.layout.num_vars, rng);
    const VectorXd z2 = random_vector(ap.layout.num_vars, rng);
    for (const auto & lmi : ap.sdp.constraints) {
      const MatrixXd lhs = lmi.evaluate(0.25 * z1 + 0.75 * z2);
      const MatrixXd rhs = 0.25 * lmi.evaluate(z1) + 0.75 * lmi.evaluate(z2);
      EXPECT_LT((lhs - rhs).norm(), 1e-9 * (1.0 + rhs.norm()));
      EXPECT_LT((lmi.evaluate(z1) - lmi.evaluate(z1).transpose()).norm(), 1e-12);
    }
  }
}

TEST(Lmi, TrackingCertificateValueMatchesWorstCase)
{
  auto inst = make_instance(10, 2, 1, 1, 3, 4, 0.05);
  SynthesisOptions opts;
  opts.mode = Mode::Theorem1;
  const auto res = solve_robust_tracking(inst.hist, inst.u_ini, inst.y_ini, inst.prob, opts);
  ASSERT_TRUE(res.solution.optimal()) << res.solution.message;
  EXPECT_TRUE(res.solution.verified);
  const auto wc = worst_case_lqte(res.solution.u, res.synthesis.ops, res.synthesis.noise.constraint_forms[0], inst.prob);
  EXPECT_NEAR(wc.value, res.solution.gamma_star, 1e-6 * (1.0 + res.solution.gamma_star));
}

TEST(Lmi, NoiselessLawGivesDeterministicOptimum)
{
  auto inst = make_instance(11, 3, 2, 2, 4, 4);
  // ||w||^2 <= 0 and exact recent data
  const auto rec = generate_recent(inst.plant, VectorXd::Ones(3), inst.T_ini, {}, std::nullopt, std::nullopt, 77);
  inst.prob.noise_law = QuadraticForm::energy_bound(0.0, inst.T_ini * 2);
  SynthesisOptions opts;
  opts.mode = Mode::Theorem1;
  const auto res = solve_robust_tracking(inst.hist, rec.measured.stacked_inputs(), rec.measured.stacked_outputs(), inst.prob, opts);
  ASSERT_TRUE(res.solution.optimal()) << res.solution.message;
  // plant-based LQ optimum
  const MatrixXd G = markov_toeplitz(inst.plant, 4);
  const VectorXd y_free = stack(simulate(inst.plant, rec.final_state, MatrixXd::Zero(2, 4)).y);
  const MatrixXd H = inst.prob.Rbar() + G.transpose() * inst.prob.Qbar() * G;
  const VectorXd u_star = -H.ldlt().solve(G.transpose() * inst.prob.Qbar() * (y_free - inst.prob.r));
  const double cost = lqte(u_star, G * u_star + y_free, inst.prob);
  EXPECT_NEAR(res.solution.gamma_star, cost, 1e-6 * (1.0 + cost));
}
