#include "ddrt/lmi.hpp"

#include <fmt/format.h>

namespace ddrt {

namespace {

MatrixXd kron_identity(int n, const MatrixXd & A)
{
  MatrixXd out = MatrixXd::Zero(n * A.rows(), n * A.cols());
  for (int k = 0; k < n; ++k) { out.block(k * A.rows(), k * A.cols(), A.rows(), A.cols()) = A; }
  return out;
}

/// Form on [u; x] equal to inner(u) alone.
QuadraticForm extend_u(const QuadraticForm & inner, int nx)
{
  const int nu = inner.dim();
  RowVectorXd b = RowVectorXd::Zero(nu + nx);
  b.head(nu) = inner.b;
  MatrixXd F = MatrixXd::Zero(nu + nx, nu + nx);
  F.topLeftCorner(nu, nu) = inner.F;
  return {inner.c, b, F};
}

/// The lifted free vector gbar = [g_w; d]; Xi selects d.
/// Returns [I, -Xi] as the map (u, gbar) -> u - d.
MatrixXd applied_input_map(int nu, const DisturbanceLift & lift)
{
  const int nx = lift.n_free();
  MatrixXd map = MatrixXd::Zero(nu, nu + nx);
  map.leftCols(nu).setIdentity();
  map.middleCols(nu + lift.n_d, nu).diagonal().setConstant(-1.0);
  return map;
}

/// [B_u, B_ini M_d, -B_u]: (u, gbar) -> y
MatrixXd lifted_output_map(const PredictorOperators & ops, const DisturbanceLift & lift)
{
  const int nu = static_cast<int>(ops.B_u.cols());
  MatrixXd map(ops.B_u.rows(), nu + lift.n_free());
  map << ops.B_u, ops.B_ini * lift.M_d, -ops.B_u;
  return map;
}

void check_lift(const PredictorOperators & ops, const DisturbanceLift & lift)
{
  if (lift.T_f * lift.m != ops.B_u.cols() || lift.M_d.rows() != ops.B_ini.cols()) {
    throw DimensionError("lifted assembly: disturbance lift does not match the predictor operators");
  }
}

}  // namespace

void TrackingProblem::validate() const
{
  if (Q.rows() != Q.cols() || R.rows() != R.cols() || Q.rows() == 0 || R.rows() == 0) {
    throw DimensionError("TrackingProblem: Q and R must be square and nonempty");
  }
  if (T_f < 1) { throw DimensionError("TrackingProblem: T_f must be positive"); }
  if (r.size() != T_f * p()) {
    throw DimensionError(fmt::format("TrackingProblem: reference has {} entries, expected T_f p = {}", r.size(), T_f * p()));
  }
  if ((Q - Q.transpose()).norm() > 1e-12 * (1.0 + Q.norm()) || min_eigenvalue(Q) < -1e-12 * (1.0 + Q.norm())) {
    throw FeasibilityError("TrackingProblem: Q must be symmetric positive semidefinite");
  }
  if ((R - R.transpose()).norm() > 1e-12 * (1.0 + R.norm()) || min_eigenvalue(R) <= 0.0) {
    throw FeasibilityError("TrackingProblem: R must be symmetric positive definite");
  }
  if (input_form && input_form->dim() != T_f * m()) {
    throw DimensionError(fmt::format("TrackingProblem: input form has dimension {}, expected {}", input_form->dim(), T_f * m()));
  }
  if (output_form && output_form->dim() != T_f * p()) {
    throw DimensionError(fmt::format("TrackingProblem: output form has dimension {}, expected {}", output_form->dim(), T_f * p()));
  }
  if (disturbance_law && disturbance_law->dim() % m() != 0) {
    throw DimensionError("TrackingProblem: disturbance law dimension is not a multiple of m");
  }
}

MatrixXd TrackingProblem::Qbar() const { return kron_identity(T_f, Q); }

MatrixXd TrackingProblem::Rbar() const { return kron_identity(T_f, R); }

InputQuadraticForm InputQuadraticForm::split(const QuadraticForm & joint, int nu, double gamma_coef)
{
  if (nu < 0 || nu > joint.dim()) { throw DimensionError("InputQuadraticForm::split: nu out of range"); }
  const int nx = joint.dim() - nu;
  InputQuadraticForm f;
  f.c0 = joint.c;
  f.c1 = joint.b.head(nu).transpose();
  f.C2 = joint.F.topLeftCorner(nu, nu);
  f.b0 = joint.b.tail(nx);
  f.B1 = joint.F.topRightCorner(nu, nx);
  f.F = joint.F.bottomRightCorner(nx, nx);
  f.gamma_coef = gamma_coef;
  return f;
}

QuadraticForm InputQuadraticForm::affine_at(const VectorXd & u, double gamma) const
{
  if (u.size() != nu()) { throw DimensionError("InputQuadraticForm: u has the wrong size"); }
  const double c = gamma_coef * gamma + c0 + 2.0 * c1.dot(u);
  RowVectorXd b = b0 + u.transpose() * B1;
  return {c, b, F};
}

QuadraticForm InputQuadraticForm::at(const VectorXd & u, double gamma) const
{
  QuadraticForm f = affine_at(u, gamma);
  f.c += u.dot(C2 * u);
  return f;
}

QgAssembly assemble_Qg(const PredictorOperators & ops, const TrackingProblem & prob)
{
  prob.validate();
  const int nu = prob.T_f * prob.m();
  if (ops.B_u.cols() != nu || ops.B_u.rows() != prob.r.size()) {
    throw DimensionError("assemble_Qg: predictor operators do not match the tracking problem");
  }
  const int nw = ops.n_w();
  const MatrixXd Qb = prob.Qbar();
  const MatrixXd Rb = prob.Rbar();

  MatrixXd ymap(ops.B_u.rows(), nu + nw);
  ymap << ops.B_u, ops.B_w;
  QuadraticForm joint = pullback(QuadraticForm(0.0, RowVectorXd::Zero(ops.B_u.rows()), -Qb), ymap, ops.y0 - prob.r);
  joint += extend_u(QuadraticForm(0.0, RowVectorXd::Zero(nu), -Rb), nw);

  QgAssembly out;
  out.Qg = InputQuadraticForm::split(joint, nu, 1.0);
  out.S = symmetrized(Rb + ops.B_u.transpose() * Qb * ops.B_u);
  return out;
}

InputQuadraticForm assemble_Qg_lifted(const PredictorOperators & ops, const DisturbanceLift & lift, const TrackingProblem & prob)
{
  prob.validate();
  check_lift(ops, lift);
  const int nu = prob.T_f * prob.m();
  const MatrixXd ymap = lifted_output_map(ops, lift);
  QuadraticForm joint = pullback(QuadraticForm(0.0, RowVectorXd::Zero(ymap.rows()), -prob.Qbar()), ymap, -prob.r);
  joint += pullback(QuadraticForm(0.0, RowVectorXd::Zero(nu), -prob.Rbar()), applied_input_map(nu, lift), VectorXd::Zero(nu));
  return InputQuadraticForm::split(joint, nu, 1.0);
}

InputQuadraticForm assemble_Psi_lifted(const QuadraticForm & Psi, const DisturbanceLift & lift)
{
  const int nu = lift.T_f * lift.m;
  if (Psi.dim() != nu) { throw DimensionError("assemble_Psi_lifted: input form has the wrong dimension"); }
  return InputQuadraticForm::split(pullback(Psi, applied_input_map(nu, lift), VectorXd::Zero(nu)), nu);
}

InputQuadraticForm assemble_Theta_lifted(const QuadraticForm & Theta, const PredictorOperators & ops, const DisturbanceLift & lift)
{
  check_lift(ops, lift);
  if (Theta.dim() != ops.B_u.rows()) { throw DimensionError("assemble_Theta_lifted: output form has the wrong dimension"); }
  const MatrixXd ymap = lifted_output_map(ops, lift);
  return InputQuadraticForm::split(pullback(Theta, ymap, VectorXd::Zero(ymap.rows())), static_cast<int>(ops.B_u.cols()));
}

InputQuadraticForm assemble_Theta_g(const QuadraticForm & Theta, const PredictorOperators & ops)
{
  if (Theta.dim() != ops.B_u.rows()) { throw DimensionError("assemble_Theta_g: output form has the wrong dimension"); }
  MatrixXd ymap(ops.B_u.rows(), ops.B_u.cols() + ops.B_w.cols());
  ymap << ops.B_u, ops.B_w;
  return InputQuadraticForm::split(pullback(Theta, ymap, ops.y0), static_cast<int>(ops.B_u.cols()));
}

AffineLmi schur_embed(const std::string & name,
                      const InputQuadraticForm & form,
                      int num_vars,
                      int u_offset,
                      int gamma_var,
                      std::span<const Multiplier> multipliers,
                      SchurStyle style)
{
  const int nu = form.nu();
  const int nx = form.nx();
  if (u_offset < 0 || u_offset + nu > num_vars || gamma_var >= num_vars) {
    throw DimensionError(fmt::format("schur_embed '{}': variable indices out of range", name));
  }
  const MatrixXd deficit = symmetrized(-form.C2);
  const double scale = 1.0 + deficit.norm();
  LmiBuilder lb(name, nu + 1 + nx, num_vars);

  if (style == SchurStyle::Inverse) {
    Eigen::LLT<MatrixXd> llt(deficit);
    if (llt.info() != Eigen::Success) {
      throw FactorizationError(fmt::format("schur_embed '{}': quadratic deficit is not positive definite", name));
    }
    const MatrixXd Sinv = spd_inverse(deficit);
    if ((deficit * Sinv - MatrixXd::Identity(nu, nu)).norm() > 1e-9 * scale) {
      throw FactorizationError(fmt::format("schur_embed '{}': deficit cancellation mismatch", name));
    }
    lb.add_block(-1, 0, 0, Sinv);
    for (int i = 0; i < nu; ++i) { lb.add(u_offset + i, i, nu, 1.0); }
  } else {
    const MatrixXd L = psd_square_factor(deficit);
    if ((L.transpose() * L - deficit).norm() > 1e-9 * scale) {
      throw FactorizationError(fmt::format("schur_embed '{}': deficit cancellation mismatch", name));
    }
    lb.add_block(-1, 0, 0, MatrixXd::Identity(nu, nu));
    for (int k = 0; k < nu; ++k) {
      for (int i = 0; i < nu; ++i) { lb.add(u_offset + i, k, nu, L(k, i)); }
    }
  }

  // affine corner block [[c0 + 2 c1 u + gamma, b0 + u B1], [., F]]
  const int o = nu;
  lb.add(-1, o, o, form.c0);
  for (int i = 0; i < nu; ++i) { lb.add(u_offset + i, o, o, 2.0 * form.c1(i)); }
  if (gamma_var >= 0) { lb.add(gamma_var, o, o, form.gamma_coef); }
  if (nx > 0) {
    lb.add_block(-1, o, o + 1, form.b0);
    lb.add_block(-1, o + 1, o + 1, form.F);
    for (int i = 0; i < nu; ++i) { lb.add_block(u_offset + i, o, o + 1, form.B1.row(i)); }
  }
  for (const auto & mlt : multipliers) {
    if (mlt.form->dim() != nx || mlt.var < 0 || mlt.var >= num_vars) {
      throw DimensionError(fmt::format("schur_embed '{}': multiplier form of dimension {} for a block of dimension {}", name,
                                       mlt.form->dim(), nx));
    }
    lb.add(mlt.var, o, o, -mlt.form->c);
    if (nx > 0) {
      lb.add_block(mlt.var, o, o + 1, -mlt.form->b);
      lb.add_block(mlt.var, o + 1, o + 1, -mlt.form->F);
    }
  }
  return lb.build();
}

AffineLmi nonnegativity(const std::string & name, int var, int num_vars)
{
  LmiBuilder lb(name, 1, num_vars);
  lb.add(var, 0, 0, 1.0);
  return lb.build();
}

AffineLmi assemble_output_constraint(const PredictorOperators & ops,
                                     const QuadraticForm & Theta,
                                     const QuadraticForm & A_w,
                                     int num_vars,
                                     int alpha_var)
{
  if (Theta.dim() > 0 && max_eigenvalue(Theta.F) > 1e-9 * std::max(1.0, Theta.F.norm())) {
    throw FactorizationError("assemble_output_constraint: Theta_22 has positive eigenvalues; the form is not certifiable");
  }
  const InputQuadraticForm Tg = assemble_Theta_g(Theta, ops);
  const Multiplier mlt{alpha_var, &A_w};
  return schur_embed("output", Tg, num_vars, 0, -1, std::span<const Multiplier>(&mlt, 1), SchurStyle::Identity);
}

AssembledProblem assemble_theorem1(const PredictorOperators & ops, const TrackingProblem & prob, const QuadraticForm & A_w)
{
  const QgAssembly qg = assemble_Qg(ops, prob);
  if (A_w.dim() != ops.n_w()) {
    throw DimensionError(fmt::format("assemble_theorem1: A_w has dimension {}, expected n_w = {}", A_w.dim(), ops.n_w()));
  }
  AssembledProblem out;
  auto & lay = out.layout;
  lay.nu = qg.Qg.nu();
  lay.gamma = lay.nu;
  int next = lay.nu + 1;
  lay.alpha["alpha"] = next++;
  if (prob.output_form) { lay.alpha["alpha_y"] = next++; }
  lay.num_vars = next;

  auto & sdp = out.sdp;
  sdp.num_vars = lay.num_vars;
  sdp.cost = VectorXd::Zero(lay.num_vars);
  sdp.cost(lay.gamma) = 1.0;
  sdp.labels.resize(static_cast<std::size_t>(lay.num_vars));
  for (int i = 0; i < lay.nu; ++i) { sdp.labels[static_cast<std::size_t>(i)] = fmt::format("u[{}]", i); }
  sdp.labels[static_cast<std::size_t>(lay.gamma)] = "gamma";
  for (const auto & [nm, idx] : lay.alpha) { sdp.labels[static_cast<std::size_t>(idx)] = nm; }

  const Multiplier mlt{lay.alpha.at("alpha"), &A_w};
  sdp.constraints.push_back(
    schur_embed("tracking", qg.Qg, lay.num_vars, 0, lay.gamma, std::span<const Multiplier>(&mlt, 1), SchurStyle::Inverse));
  out.certificate_sizes.push_back(sdp.constraints.back().dim());

  if (prob.input_form) {
    const InputQuadraticForm Pu = InputQuadraticForm::split(*prob.input_form, lay.nu);
    sdp.constraints.push_back(schur_embed("input", Pu, lay.num_vars, 0, -1, {}, SchurStyle::Identity));
    out.certificate_sizes.push_back(sdp.constraints.back().dim());
  }
  if (prob.output_form) {
    sdp.constraints.push_back(assemble_output_constraint(ops, *prob.output_form, A_w, lay.num_vars, lay.alpha.at("alpha_y")));
    out.certificate_sizes.push_back(sdp.constraints.back().dim());
  }
  for (const auto & [nm, idx] : lay.alpha) { sdp.constraints.push_back(nonnegativity(nm + " >= 0", idx, lay.num_vars)); }
  return out;
}

AssembledProblem assemble_theorem3(const PredictorOperators & ops,
                                   const TrackingProblem & prob,
                                   const DisturbanceLift & lift,
                                   const LiftedForms & forms)
{
  if (!prob.disturbance_law) { throw DimensionError("assemble_theorem3: the problem has no disturbance law"); }
  const InputQuadraticForm Qg = assemble_Qg_lifted(ops, lift, prob);
  if (forms.noise.dim() != lift.n_free() || forms.disturbance.dim() != lift.n_free()) {
    throw DimensionError("assemble_theorem3: lifted forms do not match the lift");
  }

  AssembledProblem out;
  auto & lay = out.layout;
  lay.nu = Qg.nu();
  lay.gamma = lay.nu;
  int next = lay.nu + 1;
  lay.alpha["alpha_w"] = next++;
  lay.alpha["alpha_d"] = next++;
  if (prob.input_form) {
    lay.alpha["alpha_u_w"] = next++;
    lay.alpha["alpha_u_d"] = next++;
  }
  if (prob.output_form) {
    lay.alpha["alpha_y_w"] = next++;
    lay.alpha["alpha_y_d"] = next++;
  }
  lay.num_vars = next;

  auto & sdp = out.sdp;
  sdp.num_vars = lay.num_vars;
  sdp.cost = VectorXd::Zero(lay.num_vars);
  sdp.cost(lay.gamma) = 1.0;
  sdp.labels.resize(static_cast<std::size_t>(lay.num_vars));
  for (int i = 0; i < lay.nu; ++i) { sdp.labels[static_cast<std::size_t>(i)] = fmt::format("u[{}]", i); }
  sdp.labels[static_cast<std::size_t>(lay.gamma)] = "gamma";
  for (const auto & [nm, idx] : lay.alpha) { sdp.labels[static_cast<std::size_t>(idx)] = nm; }

  auto pair = [&](const char * w, const char * d) {
    return std::vector<Multiplier>{{lay.alpha.at(w), &forms.noise}, {lay.alpha.at(d), &forms.disturbance}};
  };

  const auto mt = pair("alpha_w", "alpha_d");
  sdp.constraints.push_back(schur_embed("tracking", Qg, lay.num_vars, 0, lay.gamma, mt, SchurStyle::Inverse));
  out.certificate_sizes.push_back(sdp.constraints.back().dim());

  if (prob.input_form) {
    if (max_eigenvalue(prob.input_form->F) > 1e-9 * std::max(1.0, prob.input_form->F.norm())) {
      throw FactorizationError("assemble_theorem3: Psi_22 has positive eigenvalues; the form is not certifiable");
    }
    const auto mu = pair("alpha_u_w", "alpha_u_d");
    sdp.constraints.push_back(
      schur_embed("input", assemble_Psi_lifted(*prob.input_form, lift), lay.num_vars, 0, -1, mu, SchurStyle::Identity));
    out.certificate_sizes.push_back(sdp.constraints.back().dim());
  }
  if (prob.output_form) {
    if (max_eigenvalue(prob.output_form->F) > 1e-9 * std::max(1.0, prob.output_form->F.norm())) {
      throw FactorizationError("assemble_theorem3: Theta_22 has positive eigenvalues; the form is not certifiable");
    }
    const auto my = pair("alpha_y_w", "alpha_y_d");
    sdp.constraints.push_back(schur_embed("output", assemble_Theta_lifted(*prob.output_form, ops, lift), lay.num_vars, 0, -1, my,
                                          SchurStyle::Identity));
    out.certificate_sizes.push_back(sdp.constraints.back().dim());
  }
  for (const auto & [nm, idx] : lay.alpha) { sdp.constraints.push_back(nonnegativity(nm + " >= 0", idx, lay.num_vars)); }
  return out;
}

}  // namespace ddrt
