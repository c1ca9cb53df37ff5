#pragma once

/**
 * @file
 * @brief Quadratic forms on [1; x], affine pullbacks, and ellipsoid sampling.
 */

#include "linalg.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ddrt {

/**
 * @brief The function x -> [1; x]^T [c b; b^T F] [1; x] = c + 2 b x + x^T F x.
 *
 * F is symmetrized on construction. A form is "bounded" when F is negative
 * definite, in which case {x : value(x) >= 0} is an ellipsoid (possibly empty).
 */
struct QuadraticForm
{
  double c{0.0};
  RowVectorXd b;
  MatrixXd F;

  QuadraticForm() = default;
  QuadraticForm(double c, RowVectorXd b, MatrixXd F);

  /// c - ||x||^2, i.e. the energy bound ||x||^2 <= c.
  static QuadraticForm energy_bound(double c, int dim);

  /// Form on a zero-dimensional vector (a constant).
  static QuadraticForm constant(double c);

  int dim() const { return static_cast<int>(F.rows()); }
  double evaluate(const VectorXd & x) const;

  /// Full (dim + 1) x (dim + 1) symmetric matrix.
  MatrixXd matrix() const;

  bool is_bounded() const;

  QuadraticForm & operator+=(const QuadraticForm & o);
  QuadraticForm operator*(double s) const;
};

inline QuadraticForm operator+(QuadraticForm a, const QuadraticForm & b) { return a += b; }

/// The form z -> outer(map z + offset).
QuadraticForm pullback(const QuadraticForm & outer, const MatrixXd & map, const VectorXd & offset);

/// {center + shape * x : ||x|| <= 1}
struct Ellipsoid
{
  VectorXd center;
  MatrixXd shape;
  /// value of the form at the center; the squared "radius" before whitening
  double slack{0.0};
};

/// Feasible set of a bounded form. Throws FeasibilityError when the set is empty
/// and DimensionError when the form is not bounded.
Ellipsoid to_ellipsoid(const QuadraticForm & form);

/// Largest rho such that value(x) >= 0 whenever ||x|| <= rho (0 if the origin is infeasible).
double origin_ball_radius(const QuadraticForm & form);

VectorXd sample_unit_ball(int dim, std::mt19937_64 & rng);

/// One uniform-in-ball sample mapped through the ellipsoid of a bounded form.
VectorXd sample_in_ellipsoid(const QuadraticForm & form, std::mt19937_64 & rng);

/// A point where every form is nonnegative (strictly positive when the intersection has interior).
/// Throws FeasibilityError if none is found.
VectorXd interior_point(std::span<const QuadraticForm> forms);

/**
 * @brief `count` vectors satisfying every form, deterministic per seed.
 *
 * A single form is sampled uniformly from its ellipsoid. Several forms are
 * sampled uniformly from the ellipsoid of their sum (which contains the
 * intersection); a draw outside the intersection is pulled back along the
 * segment towards an interior point until it reaches the boundary.
 */
std::vector<VectorXd> sample_feasible(std::span<const QuadraticForm> forms, int count, std::uint64_t seed);

}  // namespace ddrt
