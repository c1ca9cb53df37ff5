#pragma once

/**
 * @file
 * @brief Dense linear-algebra helpers: SVD rank rule, orthonormal bases, SPD solves.
 */

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace ddrt {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

/// Relative singular-value threshold used by every rank decision in the library.
inline constexpr double kDefaultRankTol = 1e-10;

/// Base class of all library errors.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent sizes or horizons.
class DimensionError : public Error
{
public:
  using Error::Error;
};

/// A rank condition required by the data-driven representation failed.
class RankError : public Error
{
public:
  using Error::Error;
};

/// Empty feasible set, violated quadratic bound, or an infeasible realization.
class FeasibilityError : public Error
{
public:
  using Error::Error;
};

/// A factorization could not be computed to the required accuracy.
class FactorizationError : public Error
{
public:
  using Error::Error;
};

/// Number of singular values strictly above `rel_tol * sigma_max`.
int numerical_rank(const MatrixXd & A, double rel_tol = kDefaultRankTol);

/// Orthonormal basis of ker(A) (columns), size cols(A) x (cols(A) - rank).
MatrixXd null_space(const MatrixXd & A, double rel_tol = kDefaultRankTol);

/// Orthonormal basis of range(A) (columns), size rows(A) x rank.
MatrixXd range_basis(const MatrixXd & A, double rel_tol = kDefaultRankTol);

/// (A + A^T) / 2
MatrixXd symmetrized(const MatrixXd & A);

/// Smallest eigenvalue of the symmetric part of A (0 for empty matrices).
double min_eigenvalue(const MatrixXd & A);

/// Largest eigenvalue of the symmetric part of A (0 for empty matrices).
double max_eigenvalue(const MatrixXd & A);

/// Inverse of a symmetric positive definite matrix via Cholesky, symmetrized.
/// Throws FactorizationError when the matrix is not numerically positive definite.
MatrixXd spd_inverse(const MatrixXd & S);

/**
 * @brief Square factor L with L^T L = P for a symmetric PSD matrix P.
 *
 * Eigenvalues below `rel_drop * lambda_max` are set to zero, so L keeps the
 * size of P and has zero rows in the dropped directions. Throws
 * FactorizationError if P has an eigenvalue below `-neg_tol * max(1, lambda_max)`.
 */
MatrixXd psd_square_factor(const MatrixXd & P, double rel_drop = 1e-12, double neg_tol = 1e-9);

/// Largest residual of the orthogonal projection of the columns of A onto range(B).
double projection_residual(const MatrixXd & A, const MatrixXd & B, double rel_tol = kDefaultRankTol);

}  // namespace ddrt
