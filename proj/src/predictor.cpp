#include "ddrt/predictor.hpp"

#include <fmt/format.h>

namespace ddrt {

namespace {

void check_full_row_rank(const MatrixXd & A, double rank_tol, const char * what)
{
  const int r = numerical_rank(A, rank_tol);
  if (r != A.rows()) {
    throw RankError(fmt::format("{} has rank {} < {} rows; the historical input is not exciting enough "
                                "(see the persistency-of-excitation report)",
                                what, r, A.rows()));
  }
}

MatrixXd vstack(std::initializer_list<const MatrixXd *> parts)
{
  Eigen::Index rows = 0, cols = -1;
  for (const auto * p : parts) {
    rows += p->rows();
    if (cols < 0) { cols = p->cols(); }
  }
  MatrixXd out(rows, cols);
  Eigen::Index r = 0;
  for (const auto * p : parts) {
    out.middleRows(r, p->rows()) = *p;
    r += p->rows();
  }
  return out;
}

}  // namespace

VectorXd compute_g_ini_star(const MatrixXd & Up, const VectorXd & u_ini, double rank_tol)
{
  if (u_ini.size() != Up.rows()) {
    throw DimensionError(fmt::format("compute_g_ini_star: u_ini has {} entries, U_p has {} rows", u_ini.size(), Up.rows()));
  }
  check_full_row_rank(Up, rank_tol, "U_p");
  Eigen::LLT<MatrixXd> llt(Up * Up.transpose());
  const VectorXd g = Up.transpose() * llt.solve(u_ini);
  const double resid = (Up * g - u_ini).norm();
  if (resid > 1e-8 * (1.0 + u_ini.norm())) {
    throw FactorizationError(fmt::format("compute_g_ini_star: residual {} too large", resid));
  }
  return g;
}

MatrixXd kernel_basis(const MatrixXd & Up, double rank_tol) { return null_space(Up, rank_tol); }

RowSelection select_lambda_rows(const HankelBlocks & blocks, double rank_tol)
{
  MatrixXd base = vstack({&blocks.Up, &blocks.Uf});
  check_full_row_rank(base, rank_tol, "[U_p; U_f]");

  RowSelection sel;
  int rank = static_cast<int>(base.rows());
  MatrixXd kept(0, blocks.Up.cols());
  for (int i = 0; i < blocks.Yp.rows(); ++i) {
    MatrixXd trial(kept.rows() + 1, kept.cols());
    trial << kept, blocks.Yp.row(i);
    const MatrixXd stack_rows = vstack({&blocks.Up, &trial, &blocks.Uf});
    const int r = numerical_rank(stack_rows, rank_tol);
    if (r > rank) {
      rank = r;
      kept = std::move(trial);
      sel.selected.push_back(i);
    } else {
      sel.complement.push_back(i);
    }
  }
  sel.lambda = vstack({&blocks.Up, &kept, &blocks.Uf});
  return sel;
}

PredictorOperators compute_predictor_operators(const HankelBlocks & blocks,
                                               const VectorXd & u_ini,
                                               const VectorXd & y_ini,
                                               const MatrixXd & M,
                                               double rank_tol)
{
  if (y_ini.size() != blocks.Yp.rows()) {
    throw DimensionError(fmt::format("compute_predictor_operators: y_ini has {} entries, Y_p has {} rows", y_ini.size(), blocks.Yp.rows()));
  }
  if (M.rows() != blocks.columns()) {
    throw DimensionError(fmt::format("compute_predictor_operators: M has {} rows, expected N_c = {}", M.rows(), blocks.columns()));
  }
  PredictorOperators ops;
  ops.g_ini_star = compute_g_ini_star(blocks.Up, u_ini, rank_tol);
  ops.rows = select_lambda_rows(blocks, rank_tol);
  const MatrixXd & L = ops.rows.lambda;

  // Lambda^T (Lambda Lambda^T)^{-1} via a QR factorization of Lambda^T.
  Eigen::JacobiSVD<MatrixXd> svd(L);
  const auto & sv = svd.singularValues();
  const double cond2 = std::pow(sv(0) / sv(sv.size() - 1), 2);
  if (!(cond2 < 1e12)) {
    throw FactorizationError(fmt::format("Lambda Lambda^T is ill-conditioned (condition estimate {:.3e})", cond2));
  }
  Eigen::HouseholderQR<MatrixXd> qr(L.transpose());
  const auto k = L.rows();
  const MatrixXd R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const MatrixXd Q = qr.householderQ() * MatrixXd::Identity(L.cols(), k);

  const auto nf = blocks.Uf.rows();
  MatrixXd Ef = MatrixXd::Zero(k, nf);
  Ef.bottomRows(nf).setIdentity();
  // R^{-T} Ef
  const MatrixXd RtInvEf = R.transpose().triangularView<Eigen::Lower>().solve(Ef);
  ops.Gu = Q * RtInvEf;

  ops.M = M;
  ops.B_u = blocks.Yf * ops.Gu;
  ops.B_ini = blocks.Yf - ops.B_u * blocks.Uf;
  ops.B_w = ops.B_ini * M;
  ops.y0 = ops.B_ini * ops.g_ini_star;
  ops.w0 = y_ini - blocks.Yp * ops.g_ini_star;
  return ops;
}

VectorXd predict(const PredictorOperators & ops, const VectorXd & u, const VectorXd & g_w)
{
  if (u.size() != ops.B_u.cols() || g_w.size() != ops.B_w.cols()) {
    throw DimensionError(fmt::format("predict: u has {} entries (expected {}), g_w has {} (expected {})", u.size(),
                                     ops.B_u.cols(), g_w.size(), ops.B_w.cols()));
  }
  return ops.B_u * u + ops.B_w * g_w + ops.y0;
}

VectorXd simulate_data_driven(const HankelBlocks & blocks,
                              const VectorXd & u_ini,
                              const VectorXd & y_ini,
                              const VectorXd & u,
                              double rank_tol)
{
  if (u_ini.size() != blocks.Up.rows() || y_ini.size() != blocks.Yp.rows() || u.size() != blocks.Uf.rows()) {
    throw DimensionError("simulate_data_driven: recent data or input has the wrong size");
  }
  const MatrixXd A = vstack({&blocks.Up, &blocks.Yp, &blocks.Uf});
  VectorXd rhs(A.rows());
  rhs << u_ini, y_ini, u;
  Eigen::BDCSVD<MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(rank_tol);
  const VectorXd g = svd.solve(rhs);
  const double resid = (A * g - rhs).norm();
  if (resid > 1e-8 * (1.0 + rhs.norm())) {
    throw FeasibilityError(
      fmt::format("simulate_data_driven: recent data is not a trajectory (residual {:.3e})", resid));
  }
  return blocks.Yf * g;
}

}  // namespace ddrt
