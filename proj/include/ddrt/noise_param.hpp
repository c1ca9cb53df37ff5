#pragma once

/**
 * @file
 * @brief Feasible noise and disturbance trajectories as affine images of free vectors.
 *
 * Output noise alone:           w = -Y_p M g_w + w_0.
 * Noise plus actuator disturbance (free vector gbar = [g_w; d]):
 *     [d_ini; w] = -[U_p; Y_p] M_d g_w + [u_ini; y_ini],
 * with d passed through unchanged.
 */

#include "predictor.hpp"
#include "quadratic_form.hpp"

#include <vector>

namespace ddrt {

struct NoiseParameterization
{
  MatrixXd map;     ///< trajectory-dim x n_free
  VectorXd offset;  ///< trajectory-dim
  std::vector<QuadraticForm> constraint_forms;  ///< forms on the free vector
  int n_free{0};

  VectorXd trajectory(const VectorXd & free) const { return map * free + offset; }
};

/// M = N(U_p) R(N(U_p)^T Y_p^T), both factors orthonormal; n_w = rank(Y_p N(U_p)).
MatrixXd reduced_noise_basis(const MatrixXd & Up, const MatrixXd & Yp, double rank_tol = kDefaultRankTol);

/// A_w: the noise law expressed on g_w through w = -Y_p M g_w + w_0.
/// Throws DimensionError if Phi is not bounded.
QuadraticForm noise_constraint_form(const QuadraticForm & Phi, const MatrixXd & Yp, const MatrixXd & M, const VectorXd & w0);

/// Noise-only parameterization (map -Y_p M, offset w_0) carrying the form A_w.
NoiseParameterization noise_parameterization(const QuadraticForm & Phi, const MatrixXd & Yp, const PredictorOperators & ops);

/**
 * @brief Joint parameterization of [d_ini; w; d] by gbar = [g_w; d].
 *
 * The trajectory vector is ordered [d_ini (T_ini m); w (T_ini p); d (T_f m)].
 */
struct DisturbanceLift
{
  NoiseParameterization param;
  MatrixXd M_d;  ///< orthonormal basis of range([U_p; Y_p]^T), N_c x n_d
  int n_d{0};
  int T_ini{0};
  int T_f{0};
  int m{0};
  int p{0};

  int n_free() const { return param.n_free; }

  VectorXd g_w(const VectorXd & gbar) const { return gbar.head(n_d); }
  VectorXd d(const VectorXd & gbar) const { return gbar.tail(T_f * m); }
  VectorXd d_ini(const VectorXd & gbar) const;
  VectorXd w(const VectorXd & gbar) const;
  /// [d_ini; d]
  VectorXd d_bar(const VectorXd & gbar) const;

  /// Rows of the trajectory map/offset selecting w, and selecting [d_ini; d].
  MatrixXd w_map() const;
  VectorXd w_offset() const;
  MatrixXd dbar_map() const;
  VectorXd dbar_offset() const;
};

/// Throws RankError if rank([U_p; Y_p]) - T_ini m does not equal rank(Y_p N(U_p)).
DisturbanceLift disturbance_lift(const MatrixXd & Up,
                                 const MatrixXd & Yp,
                                 const VectorXd & u_ini,
                                 const VectorXd & y_ini,
                                 int T_f,
                                 int m,
                                 double rank_tol = kDefaultRankTol);

struct LiftedForms
{
  QuadraticForm noise;        ///< Phi_w bar on gbar
  QuadraticForm disturbance;  ///< Phi_d bar on gbar
};

/// Pull the noise law Phi (on w) and disturbance law Phi_d (on [d_ini; d]) back to gbar.
LiftedForms lift_quadratic_constraints(const QuadraticForm & Phi, const QuadraticForm & Phi_d, const DisturbanceLift & lift);

}  // namespace ddrt
