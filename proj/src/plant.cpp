#include "ddrt/plant.hpp"

#include <fmt/format.h>

namespace ddrt {

StateSpacePlant::StateSpacePlant(MatrixXd A, MatrixXd B, MatrixXd C, MatrixXd D, double rank_tol)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), D_(std::move(D))
{
  const auto n = A_.rows();
  if (n == 0 || A_.cols() != n) { throw DimensionError("StateSpacePlant: A must be square and nonempty"); }
  if (B_.rows() != n || B_.cols() == 0) {
    throw DimensionError(fmt::format("StateSpacePlant: B is {}x{}, expected {} rows", B_.rows(), B_.cols(), n));
  }
  if (C_.cols() != n || C_.rows() == 0) {
    throw DimensionError(fmt::format("StateSpacePlant: C is {}x{}, expected {} columns", C_.rows(), C_.cols(), n));
  }
  if (D_.rows() != C_.rows() || D_.cols() != B_.cols()) {
    throw DimensionError(
      fmt::format("StateSpacePlant: D is {}x{}, expected {}x{}", D_.rows(), D_.cols(), C_.rows(), B_.cols()));
  }
  const int r = numerical_rank(observability_matrix(static_cast<int>(n)), rank_tol);
  if (r != n) {
    throw RankError(fmt::format("StateSpacePlant: (A, C) is not observable (rank {} < n = {})", r, n));
  }
}

MatrixXd StateSpacePlant::observability_matrix(int depth) const
{
  MatrixXd O(depth * p(), n());
  MatrixXd CAk = C_;
  for (int k = 0; k < depth; ++k) {
    O.middleRows(k * p(), p()) = CAk;
    CAk = CAk * A_;
  }
  return O;
}

SimulationResult simulate(const StateSpacePlant & plant, const VectorXd & x0, const MatrixXd & u)
{
  if (x0.size() != plant.n() || u.rows() != plant.m()) {
    throw DimensionError(fmt::format(
      "simulate: x0 has {} entries (n = {}), u has {} rows (m = {})", x0.size(), plant.n(), u.rows(), plant.m()));
  }
  SimulationResult res;
  res.y.resize(plant.p(), u.cols());
  VectorXd x = x0;
  for (Eigen::Index k = 0; k < u.cols(); ++k) {
    res.y.col(k) = plant.C() * x + plant.D() * u.col(k);
    x = plant.A() * x + plant.B() * u.col(k);
  }
  res.x_final = x;
  return res;
}

int compute_lag(const StateSpacePlant & plant, double rank_tol)
{
  for (int l = 1; l <= plant.n(); ++l) {
    if (numerical_rank(plant.observability_matrix(l), rank_tol) == plant.n()) { return l; }
  }
  throw RankError("compute_lag: plant is unobservable, lag undefined");
}

namespace {

MatrixXd uniform_inputs(int m, int T, UniformInputLaw law, std::mt19937_64 & rng)
{
  MatrixXd u(m, T);
  if (law.lower == law.upper) {
    u.setConstant(law.lower);
    return u;
  }
  std::uniform_real_distribution<double> dist(law.lower, law.upper);
  for (int k = 0; k < T; ++k) {
    for (int i = 0; i < m; ++i) { u(i, k) = dist(rng); }
  }
  return u;
}

VectorXd draw_checked(const Perturbation & pert, std::mt19937_64 & rng, const char * what)
{
  VectorXd v = pert.sampler ? pert.sampler(pert.law, rng) : sample_in_ellipsoid(pert.law, rng);
  if (v.size() != pert.law.dim()) {
    throw DimensionError(fmt::format("generate_recent: {} sample has size {}, law has dim {}", what, v.size(), pert.law.dim()));
  }
  const double value = pert.law.evaluate(v);
  if (value < 0.0) {
    throw FeasibilityError(fmt::format("generate_recent: {} sample violates its quadratic bound (value {})", what, value));
  }
  return v;
}

}  // namespace

GeneratedTrajectory generate_historical(const StateSpacePlant & plant, int T_d, UniformInputLaw law, std::uint64_t seed)
{
  if (T_d < 1) { throw DimensionError("generate_historical: T_d must be positive"); }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd x0(plant.n());
  for (int i = 0; i < plant.n(); ++i) { x0(i) = normal(rng); }
  MatrixXd u = uniform_inputs(plant.m(), T_d, law, rng);
  auto sim = simulate(plant, x0, u);
  return {TrajectoryData(std::move(u), std::move(sim.y)), x0, sim.x_final};
}

RecentData generate_recent(const StateSpacePlant & plant,
                           const VectorXd & x_start,
                           int T_ini,
                           UniformInputLaw law,
                           const std::optional<Perturbation> & noise,
                           const std::optional<Perturbation> & disturbance,
                           std::uint64_t seed)
{
  if (T_ini < 1) { throw DimensionError("generate_recent: T_ini must be positive"); }
  std::mt19937_64 rng(seed);
  const int m = plant.m(), p = plant.p();
  const MatrixXd u_nom = uniform_inputs(m, T_ini, law, rng);

  RecentData out;
  out.w = VectorXd::Zero(T_ini * p);
  out.d_ini = VectorXd::Zero(T_ini * m);
  if (noise) {
    if (noise->law.dim() != T_ini * p) {
      throw DimensionError(fmt::format("generate_recent: noise law dim {} != T_ini p = {}", noise->law.dim(), T_ini * p));
    }
    out.w = draw_checked(*noise, rng, "noise");
  }
  if (disturbance) {
    const int dim = disturbance->law.dim();
    if (dim < T_ini * m || dim % m != 0) {
      throw DimensionError(fmt::format("generate_recent: disturbance law dim {} incompatible with T_ini m = {}", dim, T_ini * m));
    }
    out.d_bar = draw_checked(*disturbance, rng, "disturbance");
    out.d_ini = out.d_bar.head(T_ini * m);
  }

  const MatrixXd u_applied = u_nom - unstack(out.d_ini, m);
  auto sim = simulate(plant, x_start, u_applied);
  out.clean = TrajectoryData(u_applied, sim.y);
  out.measured = TrajectoryData(u_nom, sim.y + unstack(out.w, p));
  out.final_state = sim.x_final;
  return out;
}

}  // namespace ddrt
