#include "ddrt/noise_param.hpp"

#include <fmt/format.h>

namespace ddrt {

MatrixXd reduced_noise_basis(const MatrixXd & Up, const MatrixXd & Yp, double rank_tol)
{
  if (Up.cols() != Yp.cols()) { throw DimensionError("reduced_noise_basis: U_p and Y_p column counts differ"); }
  if (numerical_rank(Up, rank_tol) != Up.rows()) {
    throw RankError("reduced_noise_basis: U_p does not have full row rank");
  }
  const MatrixXd N = null_space(Up, rank_tol);
  if (N.cols() == 0) { return MatrixXd(Up.cols(), 0); }
  const MatrixXd YN = Yp * N;
  // range(N^T Y_p^T); zero Y_p gives an empty basis
  if (YN.norm() == 0.0) { return MatrixXd(Up.cols(), 0); }
  const MatrixXd R = range_basis(YN.transpose(), rank_tol);
  return N * R;
}

QuadraticForm noise_constraint_form(const QuadraticForm & Phi, const MatrixXd & Yp, const MatrixXd & M, const VectorXd & w0)
{
  if (!Phi.is_bounded()) { throw DimensionError("noise_constraint_form: noise law is not bounded (Phi_22 not negative definite)"); }
  return pullback(Phi, -(Yp * M), w0);
}

NoiseParameterization noise_parameterization(const QuadraticForm & Phi, const MatrixXd & Yp, const PredictorOperators & ops)
{
  NoiseParameterization np;
  np.map = -(Yp * ops.M);
  np.offset = ops.w0;
  np.n_free = ops.n_w();
  np.constraint_forms.push_back(noise_constraint_form(Phi, Yp, ops.M, ops.w0));
  return np;
}

VectorXd DisturbanceLift::d_ini(const VectorXd & gbar) const { return param.trajectory(gbar).head(T_ini * m); }

VectorXd DisturbanceLift::w(const VectorXd & gbar) const { return param.trajectory(gbar).segment(T_ini * m, T_ini * p); }

VectorXd DisturbanceLift::d_bar(const VectorXd & gbar) const { return dbar_map() * gbar + dbar_offset(); }

MatrixXd DisturbanceLift::w_map() const { return param.map.middleRows(T_ini * m, T_ini * p); }

VectorXd DisturbanceLift::w_offset() const { return param.offset.segment(T_ini * m, T_ini * p); }

MatrixXd DisturbanceLift::dbar_map() const
{
  MatrixXd out(T_ini * m + T_f * m, param.n_free);
  out << param.map.topRows(T_ini * m), param.map.bottomRows(T_f * m);
  return out;
}

VectorXd DisturbanceLift::dbar_offset() const
{
  VectorXd out(T_ini * m + T_f * m);
  out << param.offset.head(T_ini * m), param.offset.tail(T_f * m);
  return out;
}

DisturbanceLift disturbance_lift(const MatrixXd & Up,
                                 const MatrixXd & Yp,
                                 const VectorXd & u_ini,
                                 const VectorXd & y_ini,
                                 int T_f,
                                 int m,
                                 double rank_tol)
{
  if (m <= 0 || Up.rows() % m != 0 || u_ini.size() != Up.rows() || y_ini.size() != Yp.rows() || T_f < 1) {
    throw DimensionError("disturbance_lift: inconsistent dimensions");
  }
  DisturbanceLift lift;
  lift.m = m;
  lift.T_ini = static_cast<int>(Up.rows()) / m;
  lift.p = static_cast<int>(Yp.rows()) / lift.T_ini;
  lift.T_f = T_f;

  MatrixXd UY(Up.rows() + Yp.rows(), Up.cols());
  UY << Up, Yp;
  lift.M_d = range_basis(UY.transpose(), rank_tol);
  lift.n_d = static_cast<int>(lift.M_d.cols());

  const int n_w = numerical_rank(Yp * null_space(Up, rank_tol), rank_tol);
  if (lift.n_d != n_w + lift.T_ini * m) {
    throw RankError(fmt::format("disturbance_lift: rank([U_p; Y_p]) = {} but rank(Y_p N(U_p)) + T_ini m = {}; "
                                "check U_p rank and data diagnostics",
                                lift.n_d, n_w + lift.T_ini * m));
  }

  const int nx = lift.T_ini * (m + lift.p);
  const int nd = T_f * m;
  auto & P = lift.param;
  P.n_free = lift.n_d + nd;
  P.map = MatrixXd::Zero(nx + nd, P.n_free);
  P.map.topLeftCorner(nx, lift.n_d) = -(UY * lift.M_d);
  P.map.bottomRightCorner(nd, nd).setIdentity();
  P.offset = VectorXd::Zero(nx + nd);
  P.offset.head(nx) << u_ini, y_ini;
  return lift;
}

LiftedForms lift_quadratic_constraints(const QuadraticForm & Phi, const QuadraticForm & Phi_d, const DisturbanceLift & lift)
{
  if (!Phi.is_bounded() || !Phi_d.is_bounded()) {
    throw DimensionError("lift_quadratic_constraints: noise and disturbance laws must be bounded");
  }
  LiftedForms out;
  out.noise = pullback(Phi, lift.w_map(), lift.w_offset());
  out.disturbance = pullback(Phi_d, lift.dbar_map(), lift.dbar_offset());
  return out;
}

}  // namespace ddrt
