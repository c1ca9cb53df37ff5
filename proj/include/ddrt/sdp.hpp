#pragma once

/**
 * @file
 * @brief Semidefinite programs in LMI form and a primal-dual interior-point solver.
 *
 * Every problem has the single canonical form
 * \f[
 *   \min_z c^T z \quad \text{s.t.} \quad F^{(k)}_0 + \sum_i z_i F^{(k)}_i \succeq 0, \; k = 1..K,
 * \f]
 * with scalar inequalities expressed as 1x1 LMIs.
 */

#include "linalg.hpp"

#include <Eigen/Sparse>

#include <iosfwd>
#include <string>
#include <vector>

namespace ddrt {

using SparseMatrixXd = Eigen::SparseMatrix<double>;

/// F0 + sum_i z_i F_i >= 0 with symmetric coefficient matrices.
struct AffineLmi
{
  std::string name;
  MatrixXd F0;
  std::vector<SparseMatrixXd> F;  ///< one per decision variable, empty when the variable is absent

  int dim() const { return static_cast<int>(F0.rows()); }
  MatrixXd evaluate(const VectorXd & z) const;
};

/// Accumulates symmetric entries of an AffineLmi.
class LmiBuilder
{
public:
  LmiBuilder(std::string name, int dim, int num_vars);

  /// Adds `value` at (i, j) and (j, i) of the coefficient of variable `var` (-1 for the constant).
  void add(int var, int i, int j, double value);
  /// Adds a dense symmetric block with top-left corner (i0, j0), mirrored when off-diagonal.
  void add_block(int var, int i0, int j0, const MatrixXd & block);

  AffineLmi build() const;

private:
  std::string name_;
  int dim_;
  MatrixXd F0_;
  std::vector<std::vector<Eigen::Triplet<double>>> trips_;
};

struct SdpProblem
{
  int num_vars{0};
  VectorXd cost;
  std::vector<AffineLmi> constraints;
  std::vector<std::string> labels;

  /// Throws DimensionError if an LMI does not carry num_vars coefficients or has mismatched sizes.
  void validate() const;
  /// Index of a labelled variable, -1 if absent.
  int index_of(const std::string & label) const;
};

enum class SdpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

std::string to_string(SdpStatus s);

struct SolverOptions
{
  double feas_tol{1e-8};
  double gap_tol{1e-8};
  int max_iter{150};
  double time_limit{120.0};  ///< seconds
  bool verbose{false};       ///< per-iteration trace on stderr
};

struct SdpSolution
{
  VectorXd z;
  SdpStatus status{SdpStatus::NumericalFailure};
  double objective{0.0};
  int iterations{0};
  double runtime{0.0};
  double primal_infeasibility{0.0};
  double dual_infeasibility{0.0};
  double relative_gap{0.0};
  std::string message;
};

/// Infeasible-start primal-dual path following (HKM direction, Mehrotra predictor-corrector).
/// Infeasible/unbounded outcomes are returned as statuses, never thrown.
SdpSolution solve(const SdpProblem & prob, const SolverOptions & opts = {});

struct VerificationReport
{
  std::vector<double> min_eigenvalues;
  double cost{0.0};
  bool pass{false};
};

/// Re-certifies z directly from the problem data: every LMI's smallest eigenvalue >= -tol (1 + ||F0||_F).
VerificationReport verify_solution(const SdpProblem & prob, const VectorXd & z, double tol = 1e-7);

/// SDPA sparse format (min c^T x s.t. sum x_i G_i - G_0 >= 0, with G_0 = -F0 and G_i = F_i).
void write_sdpa(const SdpProblem & prob, std::ostream & os);

}  // namespace ddrt
