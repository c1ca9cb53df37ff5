#pragma once

/**
 * @file
 * @brief Behavioral output predictor built from Hankel data.
 *
 * Given recent data (u_ini, y_ini) and a basis M of admissible directions for
 * g_ini, the future output is the affine map
 *
 *     y = B_u u + B_w g_w + y_0,
 *
 * where g_w parameterizes the noise w = -Y_p M g_w + w_0 that makes
 * (u_ini, y_ini - w) a trajectory.
 */

#include "trajectory.hpp"

#include <vector>

namespace ddrt {

/// Rows of Y_p kept in Lambda = [U_p; Y_p1; U_f], and the rest.
struct RowSelection
{
  std::vector<int> selected;
  std::vector<int> complement;
  MatrixXd lambda;
};

struct PredictorOperators
{
  VectorXd g_ini_star;  ///< minimum-norm solution of U_p g = u_ini
  MatrixXd M;           ///< noise basis (N_c x n_w)
  MatrixXd B_ini;       ///< T_f p x N_c
  MatrixXd B_u;         ///< T_f p x T_f m
  MatrixXd B_w;         ///< T_f p x n_w, equal to B_ini M
  VectorXd y0;          ///< B_ini g_ini_star
  VectorXd w0;          ///< y_ini - Y_p g_ini_star
  /// Lambda^T (Lambda Lambda^T)^{-1} restricted to the U_f rows: g_u = Gu (u - U_f g_ini)
  MatrixXd Gu;
  RowSelection rows;

  int n_w() const { return static_cast<int>(M.cols()); }
};

/// U_p^T (U_p U_p^T)^{-1} u_ini. Throws RankError if U_p lacks full row rank.
VectorXd compute_g_ini_star(const MatrixXd & Up, const VectorXd & u_ini, double rank_tol = kDefaultRankTol);

/// Orthonormal basis of ker(U_p).
MatrixXd kernel_basis(const MatrixXd & Up, double rank_tol = kDefaultRankTol);

/// Greedy top-to-bottom scan of Y_p rows, keeping a row iff it raises the rank of [U_p; kept; U_f].
RowSelection select_lambda_rows(const HankelBlocks & blocks, double rank_tol = kDefaultRankTol);

PredictorOperators compute_predictor_operators(const HankelBlocks & blocks,
                                               const VectorXd & u_ini,
                                               const VectorXd & y_ini,
                                               const MatrixXd & M,
                                               double rank_tol = kDefaultRankTol);

/// B_u u + B_w g_w + y_0
VectorXd predict(const PredictorOperators & ops, const VectorXd & u, const VectorXd & g_w);

/// Noiseless data-driven simulation: Y_f g for the minimum-norm g solving [U_p; Y_p; U_f] g = [u_ini; y_ini; u].
/// Throws FeasibilityError with the residual if the system is inconsistent.
VectorXd simulate_data_driven(const HankelBlocks & blocks,
                              const VectorXd & u_ini,
                              const VectorXd & y_ini,
                              const VectorXd & u,
                              double rank_tol = kDefaultRankTol);

}  // namespace ddrt
