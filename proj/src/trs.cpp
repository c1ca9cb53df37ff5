#include "ddrt/trs.hpp"

#include <fmt/format.h>

#include <cmath>

namespace ddrt {

TrsResult trs_maximize(const MatrixXd & A, const VectorXd & a, double tol)
{
  const auto n = A.rows();
  if (A.cols() != n || a.size() != n) { throw DimensionError("trs_maximize: inconsistent sizes"); }
  TrsResult res;
  if (n == 0) {
    res.x = VectorXd(0);
    res.interior = true;
    return res;
  }
  // minimize x^T H x + 2 g^T x with H = -A, g = -a
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrized(-A));
  const VectorXd lam = es.eigenvalues();
  const MatrixXd & V = es.eigenvectors();
  const VectorXd gh = V.transpose() * (-a);
  const double scale = std::max({1.0, lam.cwiseAbs().maxCoeff(), gh.norm()});
  const double l1 = lam(0);

  auto xnorm = [&](double shift) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = lam(i) + shift;
      if (d > 0.0) { s += gh(i) * gh(i) / (d * d); }
    }
    return std::sqrt(s);
  };
  auto xof = [&](double shift) {
    VectorXd y = VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = lam(i) + shift;
      if (d > 0.0) { y(i) = -gh(i) / d; }
    }
    return y;
  };

  const double eig_tol = 1e-12 * scale;
  double lambda = 0.0;
  VectorXd y;
  if (l1 > eig_tol && xnorm(0.0) <= 1.0) {
    lambda = 0.0;
    y = xof(0.0);
    res.interior = true;
  } else {
    const double lo0 = std::max(0.0, -l1);
    // weight of g on the bottom eigenspace
    double g1 = 0.0;
    Eigen::Index k1 = 0;
    while (k1 < n && lam(k1) <= l1 + eig_tol) {
      g1 += gh(k1) * gh(k1);
      ++k1;
    }
    g1 = std::sqrt(g1);
    double base = 0.0;
    for (Eigen::Index i = k1; i < n; ++i) {
      const double d = lam(i) + lo0;
      base += gh(i) * gh(i) / (d * d);
    }
    base = std::sqrt(base);
    if (g1 <= 1e-13 * scale && base <= 1.0) {
      // hard case: step to the boundary along the bottom eigenvector
      lambda = lo0;
      y = VectorXd::Zero(n);
      for (Eigen::Index i = k1; i < n; ++i) { y(i) = -gh(i) / (lam(i) + lo0); }
      y(0) = std::sqrt(std::max(0.0, 1.0 - y.squaredNorm()));
      res.hard_case = true;
    } else {
      double lo = lo0;
      double hi = lo0 + gh.norm() + 1.0;
      while (xnorm(hi) > 1.0) { hi = lo0 + 2.0 * (hi - lo0); }
      lambda = 0.5 * (lo + hi);
      for (int it = 0; it < 500; ++it) {
        const double nx = xnorm(lambda);
        if (std::abs(nx - 1.0) <= tol) { break; }
        if (nx > 1.0) { lo = lambda; } else { hi = lambda; }
        // Newton on 1/||x|| - 1
        double dn = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double d = lam(i) + lambda;
          if (d > 0.0) { dn += gh(i) * gh(i) / (d * d * d); }
        }
        const double step = (1.0 / nx - 1.0) * (nx * nx * nx) / dn;
        double next = lambda + step;
        if (!(next > lo && next < hi)) { next = 0.5 * (lo + hi); }
        if (hi - lo <= 1e-16 * std::max(1.0, hi)) { break; }
        lambda = next;
      }
      y = xof(lambda);
    }
  }
  res.x = V * y;
  res.multiplier = lambda;
  res.value = res.x.dot(A * res.x) + 2.0 * a.dot(res.x);
  return res;
}

EllipsoidMaximum maximize_over_ellipsoid(const QuadraticForm & objective, const QuadraticForm & constraint, double tol)
{
  if (objective.dim() != constraint.dim()) {
    throw DimensionError(fmt::format("maximize_over_ellipsoid: objective on {} variables, constraint on {}", objective.dim(),
                                     constraint.dim()));
  }
  const Ellipsoid E = to_ellipsoid(constraint);
  const QuadraticForm q = pullback(objective, E.shape, E.center);
  const TrsResult t = trs_maximize(q.F, q.b.transpose(), tol);
  EllipsoidMaximum out;
  out.argmax = E.center + E.shape * t.x;
  out.value = q.c + t.value;
  return out;
}

}  // namespace ddrt
