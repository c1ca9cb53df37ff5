#pragma once

/**
 * @file
 * @brief Ground-truth LTI simulator used to generate data and to check predictions.
 *
 * The controller never consults this module; it exists to produce historical
 * and recent trajectories and to provide independent reference outputs.
 */

#include "quadratic_form.hpp"
#include "trajectory.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace ddrt {

/// x_{k+1} = A x_k + B u_k,  y_k = C x_k + D u_k
class StateSpacePlant
{
public:
  /// Throws DimensionError on inconsistent sizes and RankError if (A, C) is unobservable.
  StateSpacePlant(MatrixXd A, MatrixXd B, MatrixXd C, MatrixXd D, double rank_tol = kDefaultRankTol);

  int n() const { return static_cast<int>(A_.rows()); }
  int m() const { return static_cast<int>(B_.cols()); }
  int p() const { return static_cast<int>(C_.rows()); }

  const MatrixXd & A() const { return A_; }
  const MatrixXd & B() const { return B_; }
  const MatrixXd & C() const { return C_; }
  const MatrixXd & D() const { return D_; }

  /// [C; CA; ...; CA^{depth-1}]
  MatrixXd observability_matrix(int depth) const;

private:
  MatrixXd A_, B_, C_, D_;
};

struct SimulationResult
{
  MatrixXd y;  ///< p x T
  VectorXd x_final;
};

/// Forward recursion over the columns of u (m x T).
SimulationResult simulate(const StateSpacePlant & plant, const VectorXd & x0, const MatrixXd & u);

/// Smallest l with rank [C; ...; CA^{l-1}] = n.
int compute_lag(const StateSpacePlant & plant, double rank_tol = kDefaultRankTol);

struct UniformInputLaw
{
  double lower{-1.0};
  double upper{1.0};
};

struct GeneratedTrajectory
{
  TrajectoryData data;
  VectorXd initial_state;
  VectorXd final_state;
};

/// i.i.d. uniform inputs, standard-normal initial state drawn from the same seeded stream.
GeneratedTrajectory generate_historical(const StateSpacePlant & plant, int T_d, UniformInputLaw law, std::uint64_t seed);

/// Draws a vector for a quadratic law; the default draws uniformly in its ellipsoid.
using VectorSampler = std::function<VectorXd(const QuadraticForm &, std::mt19937_64 &)>;

/// A quadratic law and the sampler that realizes it.
struct Perturbation
{
  QuadraticForm law;
  VectorSampler sampler;  ///< empty means sample_in_ellipsoid
};

struct RecentData
{
  TrajectoryData clean;     ///< applied inputs (u_ini - d_ini) and noiseless outputs
  TrajectoryData measured;  ///< nominal inputs u_ini and measured outputs y + w
  VectorXd w;               ///< realized output noise (stacked)
  VectorXd d_ini;           ///< realized actuator disturbance over the recent window (stacked)
  VectorXd d_bar;           ///< full disturbance draw [d_ini; d] when a disturbance law is given
  VectorXd final_state;
};

/**
 * @brief Recent window of length T_ini starting at x_start.
 *
 * The noise law acts on the stacked outputs (dimension T_ini p). The
 * disturbance law acts on [d_ini; d] (dimension (T_ini + T_f) m for some T_f);
 * only its first T_ini m entries perturb the recent inputs. A sample that
 * violates its law raises FeasibilityError carrying the form's value.
 */
RecentData generate_recent(const StateSpacePlant & plant,
                           const VectorXd & x_start,
                           int T_ini,
                           UniformInputLaw law,
                           const std::optional<Perturbation> & noise,
                           const std::optional<Perturbation> & disturbance,
                           std::uint64_t seed);

}  // namespace ddrt
