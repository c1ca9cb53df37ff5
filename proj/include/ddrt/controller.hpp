#pragma once

/**
 * @file
 * @brief End-to-end robust tracking synthesis, worst-case oracle, realization checks and receding horizon.
 */

#include "lmi.hpp"
#include "noise_param.hpp"
#include "plant.hpp"
#include "predictor.hpp"
#include "sdp.hpp"
#include "trajectory.hpp"
#include "trs.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ddrt {

enum class Mode { Theorem1, Theorem3 };
enum class Basis { Reduced, Redundant };

std::string to_string(Mode m);
/// Throws DimensionError for unknown names.
Mode parse_mode(const std::string & s);

struct SynthesisOptions
{
  Mode mode{Mode::Theorem1};
  Basis basis{Basis::Reduced};
  SolverOptions solver{};
  double rank_tol{kDefaultRankTol};
  double verify_tol{1e-7};
};

struct RobustSolution
{
  VectorXd u;
  double gamma_star{0.0};
  std::map<std::string, double> multipliers;
  SdpStatus status{SdpStatus::NumericalFailure};
  bool verified{false};
  int iterations{0};
  double solve_time{0.0};
  double assembly_time{0.0};
  std::string message;
  // fingerprint
  int T_ini{0};
  int T_f{0};
  int m{0};
  int p{0};
  int n_w{0};  ///< length of g_w
  int n_free{0};  ///< length of the free vector used by the certificates
  std::vector<int> lmi_sizes;
  std::uint64_t data_hash{0};

  bool optimal() const { return status == SdpStatus::Optimal; }
};

/// Intermediate products of a synthesis run, kept for validation.
struct Synthesis
{
  HankelBlocks blocks;
  PeReport pe;
  PredictorOperators ops;
  NoiseParameterization noise;          ///< theorem1: free vector g_w and form A_w
  std::optional<DisturbanceLift> lift;  ///< theorem3
  std::optional<LiftedForms> forms;     ///< theorem3
  AssembledProblem assembled;
  SdpSolution sdp_solution;
  VerificationReport verification;
  int rank_Up{0};
  int rank_UpYp{0};
  int rank_lambda{0};
  bool noise_pinned{false};  ///< theorem1: the noise set was a single point, g_w fixed to it
  double assembly_time{0.0};

  /// Constraint forms on the certificate's free vector.
  std::vector<QuadraticForm> free_vector_forms() const;
};

struct SynthesisResult
{
  RobustSolution solution;
  Synthesis synthesis;
};

/// Every stage up to and including LMI assembly.
Synthesis prepare_synthesis(const TrajectoryData & hist,
                            const VectorXd & u_ini,
                            const VectorXd & y_ini,
                            const TrackingProblem & prob,
                            const SynthesisOptions & opts);

/**
 * @brief partition -> noise basis -> predictor -> constraint forms -> LMIs -> solve -> verify.
 *
 * Library errors are rethrown with the failing stage in the message. A
 * non-optimal solver status is returned in the solution, not thrown.
 */
SynthesisResult solve_robust_tracking(const TrajectoryData & hist,
                                      const VectorXd & u_ini,
                                      const VectorXd & y_ini,
                                      const TrackingProblem & prob,
                                      const SynthesisOptions & opts);

/// min_u u^T R_bar u + ||B_u u + y_0 - r||^2_Q_bar, the optimum for a fixed noise g_w = 0.
struct DeterministicOptimum
{
  VectorXd u;
  double cost{0.0};
};
DeterministicOptimum deterministic_optimum(const PredictorOperators & ops, const TrackingProblem & prob);

/// LQTE(u, y) = sum ||y_k - r_k||^2_Q + ||u_k||^2_R over the horizon.
double lqte(const VectorXd & u, const VectorXd & y, const TrackingProblem & prob);

struct WorstCase
{
  double value{0.0};
  VectorXd g_w;
};

/// Global maximum of LQTE(u, predict(u, g_w)) over {g_w : A_w(g_w) >= 0}.
WorstCase worst_case_lqte(const VectorXd & u, const PredictorOperators & ops, const QuadraticForm & A_w, const TrackingProblem & prob);

struct RealizationReport
{
  VectorXd y;
  VectorXd applied_input;  ///< u - d (u in theorem1 mode)
  VectorXd w;
  VectorXd d_ini;
  VectorXd d;
  double lqte{0.0};
  std::optional<double> psi;
  std::optional<double> theta;
  bool feasible{true};  ///< every present constraint value >= -1e-8
};

/// Theorem1 mode: free vector g_w. Throws FeasibilityError if A_w(g_w) < 0 beyond rounding.
RealizationReport evaluate_realization(const VectorXd & u,
                                       const VectorXd & g_w,
                                       const NoiseParameterization & noise,
                                       const PredictorOperators & ops,
                                       const TrackingProblem & prob);

/// Theorem3 mode: free vector gbar = [g_w; d]. Throws FeasibilityError if a lifted form is violated.
RealizationReport evaluate_realization(const VectorXd & u,
                                       const VectorXd & gbar,
                                       const DisturbanceLift & lift,
                                       const LiftedForms & forms,
                                       const PredictorOperators & ops,
                                       const TrackingProblem & prob);

/// Evaluate using whichever parameterization the synthesis used.
RealizationReport evaluate_realization(const VectorXd & u, const VectorXd & free, const Synthesis & syn, const TrackingProblem & prob);

enum class FailurePolicy { Halt, HoldPrevious };

struct RecedingHorizonOptions
{
  int steps{20};
  int T_ini{0};
  SynthesisOptions synthesis{};
  FailurePolicy policy{FailurePolicy::Halt};
  UniformInputLaw warmup_law{};  ///< inputs of the initial T_ini-sample window
  std::uint64_t seed{0};
};

struct StepLog
{
  int k{0};
  VectorXd u;  ///< nominal input applied
  VectorXd y;  ///< true output
  VectorXd y_measured;
  double gamma_star{0.0};
  SdpStatus status{SdpStatus::NumericalFailure};
  bool held{false};
  std::string message;
};

struct ClosedLoopResult
{
  TrajectoryData warmup;  ///< measured initial window
  std::vector<StepLog> log;
  bool halted{false};
};

/**
 * @brief Re-solve every step on the latest T_ini measured samples and apply the first input block.
 *
 * Output noise and actuator disturbances are drawn per sample from balls small
 * enough that every T_ini window satisfies the laws of `prob`.
 */
ClosedLoopResult receding_horizon(const StateSpacePlant & plant,
                                  const TrajectoryData & hist,
                                  const VectorXd & x_start,
                                  const TrackingProblem & prob,
                                  const RecedingHorizonOptions & opts);

}  // namespace ddrt
