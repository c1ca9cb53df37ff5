#include "ddrt/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ddrt {

namespace {

int rank_from_singular_values(const VectorXd & sv, double rel_tol)
{
  if (sv.size() == 0 || sv(0) <= 0.0) { return 0; }
  const double thresh = rel_tol * sv(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > thresh) { ++r; }
  }
  return r;
}

}  // namespace

int numerical_rank(const MatrixXd & A, double rel_tol)
{
  if (A.size() == 0) { return 0; }
  Eigen::BDCSVD<MatrixXd> svd(A);
  return rank_from_singular_values(svd.singularValues(), rel_tol);
}

MatrixXd null_space(const MatrixXd & A, double rel_tol)
{
  const auto n = A.cols();
  if (A.rows() == 0) { return MatrixXd::Identity(n, n); }
  if (n == 0) { return MatrixXd(0, 0); }
  Eigen::BDCSVD<MatrixXd> svd(A, Eigen::ComputeFullV);
  const int r = rank_from_singular_values(svd.singularValues(), rel_tol);
  return svd.matrixV().rightCols(n - r);
}

MatrixXd range_basis(const MatrixXd & A, double rel_tol)
{
  if (A.size() == 0) { return MatrixXd(A.rows(), 0); }
  Eigen::BDCSVD<MatrixXd> svd(A, Eigen::ComputeThinU);
  const int r = rank_from_singular_values(svd.singularValues(), rel_tol);
  return svd.matrixU().leftCols(r);
}

MatrixXd symmetrized(const MatrixXd & A) { return 0.5 * (A + A.transpose()); }

double min_eigenvalue(const MatrixXd & A)
{
  if (A.size() == 0) { return 0.0; }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrized(A), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const MatrixXd & A)
{
  if (A.size() == 0) { return 0.0; }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrized(A), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

MatrixXd spd_inverse(const MatrixXd & S)
{
  Eigen::LLT<MatrixXd> llt(symmetrized(S));
  if (llt.info() != Eigen::Success) {
    throw FactorizationError("spd_inverse: matrix is not positive definite");
  }
  MatrixXd inv = llt.solve(MatrixXd::Identity(S.rows(), S.cols()));
  return symmetrized(inv);
}

MatrixXd psd_square_factor(const MatrixXd & P, double rel_drop, double neg_tol)
{
  if (P.size() == 0) { return MatrixXd(0, 0); }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrized(P));
  const VectorXd & lam = es.eigenvalues();
  const double lmax = std::max(0.0, lam(lam.size() - 1));
  if (lam(0) < -neg_tol * std::max(1.0, lmax)) {
    throw FactorizationError("psd_square_factor: matrix has a negative eigenvalue "
                             + std::to_string(lam(0)));
  }
  VectorXd root(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    root(i) = lam(i) > rel_drop * lmax ? std::sqrt(lam(i)) : 0.0;
  }
  return root.asDiagonal() * es.eigenvectors().transpose();
}

double projection_residual(const MatrixXd & A, const MatrixXd & B, double rel_tol)
{
  if (A.cols() == 0) { return 0.0; }
  const MatrixXd Q = range_basis(B, rel_tol);
  const MatrixXd resid = A - Q * (Q.transpose() * A);
  return resid.colwise().norm().maxCoeff();
}

}  // namespace ddrt
