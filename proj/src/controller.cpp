#include "ddrt/controller.hpp"

#include "ddrt/hash.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <deque>
#include <random>

namespace ddrt {

namespace {

template <class Fn>
auto stage(const char * name, Fn && fn) -> decltype(fn())
{
  try {
    return fn();
  } catch (const RankError & e) {
    throw RankError(fmt::format("[{}] {}", name, e.what()));
  } catch (const DimensionError & e) {
    throw DimensionError(fmt::format("[{}] {}", name, e.what()));
  } catch (const FeasibilityError & e) {
    throw FeasibilityError(fmt::format("[{}] {}", name, e.what()));
  } catch (const FactorizationError & e) {
    throw FactorizationError(fmt::format("[{}] {}", name, e.what()));
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::optional<double> form_value(const std::optional<QuadraticForm> & f, const VectorXd & x)
{
  if (!f) { return std::nullopt; }
  return f->evaluate(x);
}

void check_free_vector(const QuadraticForm & form, const VectorXd & x, const char * what)
{
  const double v = form.evaluate(x);
  const double tol = 1e-9 * (1.0 + std::abs(form.c));
  if (v < -tol) {
    throw FeasibilityError(fmt::format("evaluate_realization: {} constraint violated (value {:.6e})", what, v));
  }
}

void finish_report(RealizationReport & rep, const TrackingProblem & prob)
{
  rep.lqte = lqte(rep.applied_input, rep.y, prob);
  rep.psi = form_value(prob.input_form, rep.applied_input);
  rep.theta = form_value(prob.output_form, rep.y);
  rep.feasible = (!rep.psi || *rep.psi >= -1e-8) && (!rep.theta || *rep.theta >= -1e-8);
}

}  // namespace

std::string to_string(Mode m) { return m == Mode::Theorem1 ? "theorem1" : "theorem3"; }

Mode parse_mode(const std::string & s)
{
  if (s == "theorem1") { return Mode::Theorem1; }
  if (s == "theorem3") { return Mode::Theorem3; }
  throw DimensionError(fmt::format("unknown mode '{}' (expected theorem1 or theorem3)", s));
}

std::vector<QuadraticForm> Synthesis::free_vector_forms() const
{
  if (forms) { return {forms->noise, forms->disturbance}; }
  return noise.constraint_forms;
}

Synthesis prepare_synthesis(const TrajectoryData & hist,
                            const VectorXd & u_ini,
                            const VectorXd & y_ini,
                            const TrackingProblem & prob,
                            const SynthesisOptions & opts)
{
  stage("problem", [&] { prob.validate(); });
  if (hist.m() != prob.m() || hist.p() != prob.p()) {
    throw DimensionError(fmt::format("[problem] data has m = {}, p = {} but Q, R imply m = {}, p = {}", hist.m(), hist.p(),
                                     prob.m(), prob.p()));
  }
  if (u_ini.size() % prob.m() != 0 || u_ini.size() == 0) {
    throw DimensionError("[problem] u_ini length is not a positive multiple of m");
  }
  const int T_ini = static_cast<int>(u_ini.size()) / prob.m();
  if (y_ini.size() != T_ini * prob.p()) {
    throw DimensionError(fmt::format("[problem] y_ini has {} entries, expected T_ini p = {}", y_ini.size(), T_ini * prob.p()));
  }
  if (prob.noise_law.dim() != T_ini * prob.p()) {
    throw DimensionError(fmt::format("[problem] noise law on {} entries, expected T_ini p = {}", prob.noise_law.dim(), T_ini * prob.p()));
  }

  const auto t_asm = std::chrono::steady_clock::now();
  Synthesis syn;
  const double tol = opts.rank_tol;

  syn.blocks = stage("partition_blocks", [&] { return partition_blocks(hist, T_ini, prob.T_f); });
  syn.pe = check_persistent_excitation(hist.inputs(), T_ini + prob.T_f, tol);
  {
    MatrixXd UY(syn.blocks.Up.rows() + syn.blocks.Yp.rows(), syn.blocks.columns());
    UY << syn.blocks.Up, syn.blocks.Yp;
    syn.rank_UpYp = numerical_rank(UY, tol);
    syn.rank_Up = numerical_rank(syn.blocks.Up, tol);
  }

  const MatrixXd M = stage("noise_basis", [&] {
    return opts.basis == Basis::Reduced ? reduced_noise_basis(syn.blocks.Up, syn.blocks.Yp, tol) : kernel_basis(syn.blocks.Up, tol);
  });
  syn.ops = stage("predictor", [&] { return compute_predictor_operators(syn.blocks, u_ini, y_ini, M, tol); });
  syn.rank_lambda = static_cast<int>(syn.ops.rows.lambda.rows());

  if (opts.mode == Mode::Theorem1) {
    syn.noise = stage("constraint_forms", [&] { return noise_parameterization(prob.noise_law, syn.blocks.Yp, syn.ops); });
    if (opts.basis == Basis::Reduced) {
      const QuadraticForm & A_w = syn.noise.constraint_forms.front();
      const Ellipsoid e = stage("constraint_forms", [&] { return to_ellipsoid(A_w); });
      const double scale = std::max(1.0, std::abs(A_w.c) + A_w.b.norm() * e.center.norm());
      if (syn.ops.n_w() > 0 && e.slack <= 1e-12 * scale) {
        // single admissible g_w: pin it and drop the free vector
        const int Nc = static_cast<int>(syn.ops.M.rows());
        syn.ops.y0 += syn.ops.B_w * e.center;
        syn.ops.g_ini_star += syn.ops.M * e.center;
        syn.ops.w0 = y_ini - syn.blocks.Yp * syn.ops.g_ini_star;
        syn.ops.M = MatrixXd(Nc, 0);
        syn.ops.B_w = MatrixXd(syn.ops.B_ini.rows(), 0);
        syn.noise.map = MatrixXd(syn.noise.offset.size(), 0);
        syn.noise.offset = syn.ops.w0;
        syn.noise.n_free = 0;
        syn.noise.constraint_forms = {QuadraticForm::constant(prob.noise_law.evaluate(syn.ops.w0))};
        syn.noise_pinned = true;
      }
    }
    syn.assembled = stage("lmi_assembly", [&] { return assemble_theorem1(syn.ops, prob, syn.noise.constraint_forms.front()); });
  } else {
    if (!prob.disturbance_law) { throw DimensionError("[constraint_forms] theorem3 mode needs a disturbance law"); }
    if (prob.disturbance_law->dim() != (T_ini + prob.T_f) * prob.m()) {
      throw DimensionError(fmt::format("[constraint_forms] disturbance law on {} entries, expected (T_ini + T_f) m = {}",
                                       prob.disturbance_law->dim(), (T_ini + prob.T_f) * prob.m()));
    }
    syn.lift = stage("constraint_forms",
                     [&] { return disturbance_lift(syn.blocks.Up, syn.blocks.Yp, u_ini, y_ini, prob.T_f, prob.m(), tol); });
    syn.forms = stage("constraint_forms", [&] { return lift_quadratic_constraints(prob.noise_law, *prob.disturbance_law, *syn.lift); });
    syn.noise = syn.lift->param;
    stage("constraint_forms", [&] {
      const std::vector<QuadraticForm> fs{syn.forms->noise, syn.forms->disturbance};
      return interior_point(fs);
    });
    syn.assembled = stage("lmi_assembly", [&] { return assemble_theorem3(syn.ops, prob, *syn.lift, *syn.forms); });
  }

  syn.assembly_time = seconds_since(t_asm);
  return syn;
}

SynthesisResult solve_robust_tracking(const TrajectoryData & hist,
                                      const VectorXd & u_ini,
                                      const VectorXd & y_ini,
                                      const TrackingProblem & prob,
                                      const SynthesisOptions & opts)
{
  SynthesisResult res;
  res.synthesis = prepare_synthesis(hist, u_ini, y_ini, prob, opts);
  auto & syn = res.synthesis;
  const int T_ini = syn.blocks.T_ini;
  auto & sol = res.solution;
  sol.assembly_time = syn.assembly_time;
  syn.sdp_solution = stage("solve", [&] { return solve(syn.assembled.sdp, opts.solver); });
  const auto & sd = syn.sdp_solution;
  const auto & lay = syn.assembled.layout;

  sol.status = sd.status;
  sol.iterations = sd.iterations;
  sol.solve_time = sd.runtime;
  sol.message = sd.message;
  sol.T_ini = T_ini;
  sol.T_f = prob.T_f;
  sol.m = prob.m();
  sol.p = prob.p();
  sol.n_w = syn.ops.n_w();
  sol.n_free = opts.mode == Mode::Theorem1 ? syn.ops.n_w() : syn.lift->n_free();
  sol.lmi_sizes = syn.assembled.certificate_sizes;
  Fnv1a h;
  h.update(hist.inputs());
  h.update(hist.outputs());
  h.update(MatrixXd(u_ini));
  h.update(MatrixXd(y_ini));
  sol.data_hash = h.digest();

  sol.u = sd.z.head(lay.nu);
  sol.gamma_star = sd.z(lay.gamma);
  for (const auto & [name, idx] : lay.alpha) { sol.multipliers[name] = sd.z(idx); }
  if (sd.status == SdpStatus::Optimal) {
    syn.verification = stage("verify", [&] { return verify_solution(syn.assembled.sdp, sd.z, opts.verify_tol); });
    sol.verified = syn.verification.pass;
    if (!sol.verified) { sol.message += "; verification failed"; }
  }
  return res;
}

DeterministicOptimum deterministic_optimum(const PredictorOperators & ops, const TrackingProblem & prob)
{
  prob.validate();
  const MatrixXd Qb = prob.Qbar();
  const MatrixXd S = prob.Rbar() + ops.B_u.transpose() * Qb * ops.B_u;
  const VectorXd e0 = ops.y0 - prob.r;
  DeterministicOptimum out;
  out.u = Eigen::LLT<MatrixXd>(symmetrized(S)).solve(-ops.B_u.transpose() * Qb * e0);
  out.cost = lqte(out.u, ops.B_u * out.u + ops.y0, prob);
  return out;
}

double lqte(const VectorXd & u, const VectorXd & y, const TrackingProblem & prob)
{
  if (u.size() != prob.T_f * prob.m() || y.size() != prob.r.size()) { throw DimensionError("lqte: u or y has the wrong size"); }
  const VectorXd e = y - prob.r;
  double v = 0.0;
  for (int k = 0; k < prob.T_f; ++k) {
    const auto ek = e.segment(k * prob.p(), prob.p());
    const auto uk = u.segment(k * prob.m(), prob.m());
    v += ek.dot(prob.Q * ek) + uk.dot(prob.R * uk);
  }
  return v;
}

WorstCase worst_case_lqte(const VectorXd & u, const PredictorOperators & ops, const QuadraticForm & A_w, const TrackingProblem & prob)
{
  if (!A_w.is_bounded()) { throw DimensionError("worst_case_lqte: A_w is not bounded"); }
  const QgAssembly qg = assemble_Qg(ops, prob);
  // LQTE(u, .) = -Q_g(u, 0)
  const QuadraticForm cost = qg.Qg.at(u, 0.0) * -1.0;
  const EllipsoidMaximum mx = maximize_over_ellipsoid(cost, A_w);
  return {mx.value, mx.argmax};
}

RealizationReport evaluate_realization(const VectorXd & u,
                                       const VectorXd & g_w,
                                       const NoiseParameterization & noise,
                                       const PredictorOperators & ops,
                                       const TrackingProblem & prob)
{
  if (g_w.size() != noise.n_free) { throw DimensionError("evaluate_realization: free vector has the wrong size"); }
  for (const auto & f : noise.constraint_forms) { check_free_vector(f, g_w, "noise"); }
  RealizationReport rep;
  rep.w = noise.trajectory(g_w);
  rep.y = predict(ops, u, g_w);
  rep.applied_input = u;
  finish_report(rep, prob);
  return rep;
}

RealizationReport evaluate_realization(const VectorXd & u,
                                       const VectorXd & gbar,
                                       const DisturbanceLift & lift,
                                       const LiftedForms & forms,
                                       const PredictorOperators & ops,
                                       const TrackingProblem & prob)
{
  if (gbar.size() != lift.n_free() || u.size() != lift.T_f * lift.m) {
    throw DimensionError("evaluate_realization: free vector or input has the wrong size");
  }
  check_free_vector(forms.noise, gbar, "noise");
  check_free_vector(forms.disturbance, gbar, "disturbance");
  RealizationReport rep;
  rep.w = lift.w(gbar);
  rep.d_ini = lift.d_ini(gbar);
  rep.d = lift.d(gbar);
  rep.applied_input = u - rep.d;
  rep.y = ops.B_u * rep.applied_input + ops.B_ini * (lift.M_d * lift.g_w(gbar));
  finish_report(rep, prob);
  return rep;
}

RealizationReport evaluate_realization(const VectorXd & u, const VectorXd & free, const Synthesis & syn, const TrackingProblem & prob)
{
  if (syn.lift) { return evaluate_realization(u, free, *syn.lift, *syn.forms, syn.ops, prob); }
  return evaluate_realization(u, free, syn.noise, syn.ops, prob);
}

ClosedLoopResult receding_horizon(const StateSpacePlant & plant,
                                  const TrajectoryData & hist,
                                  const VectorXd & x_start,
                                  const TrackingProblem & prob,
                                  const RecedingHorizonOptions & opts)
{
  ClosedLoopResult out;
  if (opts.steps <= 0) { return out; }
  prob.validate();
  const int T_ini = opts.T_ini;
  const int m = plant.m();
  const int p = plant.p();
  if (T_ini < 1 || m != prob.m() || p != prob.p() || x_start.size() != plant.n()) {
    throw DimensionError("receding_horizon: plant, problem and T_ini are inconsistent");
  }
  if (prob.noise_law.dim() != T_ini * p) { throw DimensionError("receding_horizon: noise law does not act on T_ini p samples"); }

  std::mt19937_64 rng(opts.seed);
  const double rho_w = origin_ball_radius(prob.noise_law) / std::sqrt(static_cast<double>(T_ini));
  const bool disturbed = opts.synthesis.mode == Mode::Theorem3 && prob.disturbance_law.has_value();
  const double rho_d =
    disturbed ? origin_ball_radius(*prob.disturbance_law) / std::sqrt(static_cast<double>(T_ini + prob.T_f)) : 0.0;
  const double shrink = 1.0 - 1e-9;

  VectorXd x = x_start;
  std::deque<VectorXd> ubuf, ybuf;
  // one plant step with nominal input u; returns (true y, measured y)
  auto advance = [&](const VectorXd & u) {
    VectorXd d = VectorXd::Zero(m);
    if (disturbed) { d = sample_unit_ball(m, rng) * (rho_d * shrink); }
    const VectorXd w = sample_unit_ball(p, rng) * (rho_w * shrink);
    const VectorXd ua = u - d;
    const VectorXd y = plant.C() * x + plant.D() * ua;
    x = plant.A() * x + plant.B() * ua;
    ubuf.push_back(u);
    ybuf.push_back(y + w);
    if (static_cast<int>(ubuf.size()) > T_ini) {
      ubuf.pop_front();
      ybuf.pop_front();
    }
    return std::pair<VectorXd, VectorXd>{y, y + w};
  };

  std::uniform_real_distribution<double> unif(opts.warmup_law.lower, opts.warmup_law.upper);
  MatrixXd wu(m, T_ini), wy(p, T_ini);
  for (int k = 0; k < T_ini; ++k) {
    VectorXd u(m);
    for (int i = 0; i < m; ++i) { u(i) = unif(rng); }
    const auto [y, ym] = advance(u);
    wu.col(k) = u;
    wy.col(k) = ym;
  }
  out.warmup = TrajectoryData(wu, wy);

  VectorXd last_u = VectorXd::Zero(m);
  for (int k = 0; k < opts.steps; ++k) {
    VectorXd u_ini(T_ini * m), y_ini(T_ini * p);
    for (int j = 0; j < T_ini; ++j) {
      u_ini.segment(j * m, m) = ubuf[static_cast<std::size_t>(j)];
      y_ini.segment(j * p, p) = ybuf[static_cast<std::size_t>(j)];
    }
    StepLog entry;
    entry.k = k;
    bool ok = false;
    try {
      const SynthesisResult r = solve_robust_tracking(hist, u_ini, y_ini, prob, opts.synthesis);
      entry.status = r.solution.status;
      entry.gamma_star = r.solution.gamma_star;
      entry.message = r.solution.message;
      ok = r.solution.optimal();
      if (ok) { entry.u = r.solution.u.head(m); }
    } catch (const Error & e) {
      entry.message = e.what();
    }
    if (!ok) {
      if (opts.policy == FailurePolicy::Halt) {
        out.halted = true;
        out.log.push_back(std::move(entry));
        return out;
      }
      entry.u = last_u;
      entry.held = true;
    }
    last_u = entry.u;
    const auto [y, ym] = advance(entry.u);
    entry.y = y;
    entry.y_measured = ym;
    out.log.push_back(std::move(entry));
  }
  return out;
}

}  // namespace ddrt
