#pragma once

/**
 * @file
 * @brief Global maximization of a quadratic over a ball or an ellipsoid (trust-region subproblem).
 */

#include "quadratic_form.hpp"

namespace ddrt {

struct TrsResult
{
  VectorXd x;
  double value{0.0};
  double multiplier{0.0};  ///< lambda in (lambda I - A) x = a
  bool interior{false};
  bool hard_case{false};
};

/**
 * @brief max x^T A x + 2 a^T x subject to ||x|| <= 1.
 *
 * Eigendecomposition of A followed by a safeguarded Newton/bisection solve of
 * the secular equation ||x(lambda)|| = 1; the hard case is completed along an
 * eigenvector of the largest eigenvalue. The returned point satisfies the
 * global optimality conditions with residual below `tol`.
 */
TrsResult trs_maximize(const MatrixXd & A, const VectorXd & a, double tol = 1e-10);

struct EllipsoidMaximum
{
  VectorXd argmax;
  double value{0.0};
};

/// max objective(x) over {x : constraint(x) >= 0}. Throws FeasibilityError if the set is empty.
EllipsoidMaximum maximize_over_ellipsoid(const QuadraticForm & objective, const QuadraticForm & constraint, double tol = 1e-10);

}  // namespace ddrt
