#pragma once

/**
 * @file
 * @brief Assembly of the robust tracking certificates as affine LMIs.
 *
 * Every certificate starts from a "joint" quadratic form on [1; u; x], where u
 * is the future input and x the free noise (or noise plus disturbance) vector.
 * The form is split into groups by their degree in u; the part quadratic in u
 * is negative semidefinite and moved into a Schur-complement block, leaving a
 * matrix inequality that is affine in all decision variables.
 */

#include "noise_param.hpp"
#include "predictor.hpp"
#include "quadratic_form.hpp"
#include "sdp.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ddrt {

struct TrackingProblem
{
  VectorXd r;  ///< stacked reference, T_f p
  MatrixXd Q;  ///< p x p, PSD
  MatrixXd R;  ///< m x m, PD
  int T_f{0};
  QuadraticForm noise_law;                       ///< on w (T_ini p)
  std::optional<QuadraticForm> disturbance_law;  ///< on [d_ini; d] ((T_ini + T_f) m)
  std::optional<QuadraticForm> input_form;       ///< Psi on the applied input (T_f m)
  std::optional<QuadraticForm> output_form;      ///< Theta on y (T_f p)

  int m() const { return static_cast<int>(R.rows()); }
  int p() const { return static_cast<int>(Q.rows()); }

  /// Throws DimensionError on size mismatches and FeasibilityError if Q is not PSD or R not PD.
  void validate() const;

  MatrixXd Qbar() const;  ///< I_{T_f} kron Q
  MatrixXd Rbar() const;  ///< I_{T_f} kron R
};

/**
 * @brief [1; x] form whose coefficients depend on u (and optionally on gamma):
 *
 *   corner = gamma_coef * gamma + c0 + 2 c1^T u + u^T C2 u,
 *   row    = b0 + u^T B1,
 *   block  = F.
 */
struct InputQuadraticForm
{
  double c0{0.0};
  VectorXd c1;
  MatrixXd C2;
  RowVectorXd b0;
  MatrixXd B1;  ///< nu x nx
  MatrixXd F;
  double gamma_coef{0.0};

  int nu() const { return static_cast<int>(c1.size()); }
  int nx() const { return static_cast<int>(F.rows()); }

  /// Split a form on [u; x] (dimension nu + nx).
  static InputQuadraticForm split(const QuadraticForm & joint, int nu, double gamma_coef = 0.0);

  QuadraticForm at(const VectorXd & u, double gamma = 0.0) const;
  /// The same form without the u^T C2 u term, affine in (u, gamma).
  QuadraticForm affine_at(const VectorXd & u, double gamma = 0.0) const;
};

struct QgAssembly
{
  InputQuadraticForm Qg;  ///< on [1; g_w]; gamma_coef = 1
  MatrixXd S;             ///< R_bar + B_u^T Q_bar B_u
};

/// Q_g(u, gamma): [1; g_w]^T Q_g [1; g_w] = gamma - LQTE(u, predict(u, g_w)).
QgAssembly assemble_Qg(const PredictorOperators & ops, const TrackingProblem & prob);

/// Q_bar_g(u, gamma) on [1; gbar] with gbar = [g_w; d] and B_bar_g = [B_ini M_d, -B_u].
InputQuadraticForm assemble_Qg_lifted(const PredictorOperators & ops, const DisturbanceLift & lift, const TrackingProblem & prob);

/// Psi_bar(u) on [1; gbar]: psi(u - d).
InputQuadraticForm assemble_Psi_lifted(const QuadraticForm & Psi, const DisturbanceLift & lift);

/// Theta_bar(u) on [1; gbar]: theta(B_u u + B_bar_g gbar).
InputQuadraticForm assemble_Theta_lifted(const QuadraticForm & Theta, const PredictorOperators & ops, const DisturbanceLift & lift);

/// Theta_g(u) on [1; g_w]: theta(B_u u + B_w g_w + y_0).
InputQuadraticForm assemble_Theta_g(const QuadraticForm & Theta, const PredictorOperators & ops);

enum class SchurStyle
{
  Inverse,   ///< [[(-C2)^{-1}, [u 0]], [., affine]]; needs -C2 positive definite
  Identity,  ///< [[I, L [u 0]], [., affine]] with L^T L = -C2
};

struct Multiplier
{
  int var;
  const QuadraticForm * form;  ///< subtracted as var * form
};

/**
 * @brief Affine LMI equivalent to  form(u, gamma) - sum alpha_j Phi_j >= 0.
 *
 * Variables u occupy indices [u_offset, u_offset + nu); gamma_var < 0 means no
 * gamma. The side length is nu + 1 + nx. Throws FactorizationError if -C2 is
 * not PSD (not PD for the inverse style) or the deficit is not cancelled to 1e-9.
 */
AffineLmi schur_embed(const std::string & name,
                      const InputQuadraticForm & form,
                      int num_vars,
                      int u_offset,
                      int gamma_var,
                      std::span<const Multiplier> multipliers,
                      SchurStyle style);

/// Decision-variable layout: u first, then gamma, then named multipliers.
struct VariableLayout
{
  int nu{0};
  int gamma{-1};
  std::map<std::string, int> alpha;
  int num_vars{0};
};

struct AssembledProblem
{
  SdpProblem sdp;
  VariableLayout layout;
  std::vector<int> certificate_sizes;  ///< side lengths of the Schur-embedded LMIs, in order
};

/// 1x1 LMI alpha >= 0.
AffineLmi nonnegativity(const std::string & name, int var, int num_vars);

/**
 * @brief min gamma s.t. [[S^{-1}, [u 0]], [., Q_g^a - alpha A_w]] >= 0, alpha >= 0.
 *
 * Input and output forms of the problem, when present, add their own
 * certificates (input: on u alone; output: Theta_g - alpha_y A_w).
 */
AssembledProblem assemble_theorem1(const PredictorOperators & ops, const TrackingProblem & prob, const QuadraticForm & A_w);

/// Theta_g - alpha_y A_w >= 0, Schur-embedded with a square factor of -B_u^T Theta_22 B_u.
AffineLmi assemble_output_constraint(const PredictorOperators & ops,
                                     const QuadraticForm & Theta,
                                     const QuadraticForm & A_w,
                                     int num_vars,
                                     int alpha_var);

/// The three lifted certificates (tracking, input, output) with two multipliers each.
/// Requires prob.disturbance_law; missing input/output forms drop their certificate.
AssembledProblem assemble_theorem3(const PredictorOperators & ops,
                                   const TrackingProblem & prob,
                                   const DisturbanceLift & lift,
                                   const LiftedForms & forms);

}  // namespace ddrt
