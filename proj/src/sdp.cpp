#include "ddrt/sdp.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <limits>
#include <ostream>

namespace ddrt {

MatrixXd AffineLmi::evaluate(const VectorXd & z) const
{
  MatrixXd out = F0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (F[i].nonZeros() > 0 && z(static_cast<Eigen::Index>(i)) != 0.0) { out += z(static_cast<Eigen::Index>(i)) * F[i]; }
  }
  return out;
}

LmiBuilder::LmiBuilder(std::string name, int dim, int num_vars)
  : name_(std::move(name)), dim_(dim), F0_(MatrixXd::Zero(dim, dim)), trips_(static_cast<std::size_t>(num_vars))
{
  if (dim < 1 || num_vars < 0) { throw DimensionError("LmiBuilder: invalid size"); }
}

void LmiBuilder::add(int var, int i, int j, double value)
{
  if (i < 0 || j < 0 || i >= dim_ || j >= dim_ || var < -1 || var >= static_cast<int>(trips_.size())) {
    throw DimensionError(fmt::format("LmiBuilder '{}': entry ({}, {}) of variable {} out of range", name_, i, j, var));
  }
  if (value == 0.0) { return; }
  if (var < 0) {
    F0_(i, j) += value;
    if (i != j) { F0_(j, i) += value; }
    return;
  }
  auto & t = trips_[static_cast<std::size_t>(var)];
  t.emplace_back(i, j, value);
  if (i != j) { t.emplace_back(j, i, value); }
}

void LmiBuilder::add_block(int var, int i0, int j0, const MatrixXd & block)
{
  for (Eigen::Index c = 0; c < block.cols(); ++c) {
    for (Eigen::Index r = 0; r < block.rows(); ++r) {
      const int i = i0 + static_cast<int>(r);
      const int j = j0 + static_cast<int>(c);
      // diagonal blocks are symmetric: take the lower triangle only
      if (i0 == j0 && i < j) { continue; }
      add(var, i, j, block(r, c));
    }
  }
}

AffineLmi LmiBuilder::build() const
{
  AffineLmi lmi;
  lmi.name = name_;
  lmi.F0 = F0_;
  lmi.F.reserve(trips_.size());
  for (const auto & t : trips_) {
    SparseMatrixXd S(dim_, dim_);
    S.setFromTriplets(t.begin(), t.end());
    S.prune(0.0);
    lmi.F.push_back(std::move(S));
  }
  return lmi;
}

void SdpProblem::validate() const
{
  if (num_vars < 0 || cost.size() != num_vars) {
    throw DimensionError(fmt::format("SdpProblem: cost has {} entries for {} variables", cost.size(), num_vars));
  }
  if (!labels.empty() && static_cast<int>(labels.size()) != num_vars) {
    throw DimensionError("SdpProblem: label count differs from variable count");
  }
  for (const auto & lmi : constraints) {
    if (lmi.F0.rows() != lmi.F0.cols() || lmi.F0.rows() == 0) {
      throw DimensionError(fmt::format("SdpProblem: LMI '{}' has a non-square constant term", lmi.name));
    }
    if (static_cast<int>(lmi.F.size()) != num_vars) {
      throw DimensionError(fmt::format("SdpProblem: LMI '{}' has {} coefficients for {} variables", lmi.name, lmi.F.size(), num_vars));
    }
    for (const auto & Fi : lmi.F) {
      if (Fi.rows() != lmi.dim() || Fi.cols() != lmi.dim()) {
        throw DimensionError(fmt::format("SdpProblem: LMI '{}' has a coefficient of the wrong size", lmi.name));
      }
    }
  }
}

int SdpProblem::index_of(const std::string & label) const
{
  const auto it = std::find(labels.begin(), labels.end(), label);
  return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

std::string to_string(SdpStatus s)
{
  switch (s) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::Infeasible: return "infeasible";
    case SdpStatus::Unbounded: return "unbounded";
    case SdpStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

struct Coefficient
{
  int var;
  const SparseMatrixXd * F;
  std::vector<int> cols;  ///< columns holding nonzeros
};

struct Block
{
  const AffineLmi * lmi;
  std::vector<Coefficient> coefs;
  MatrixXd X, S, Sinv;
  int n;
};

double inner(const SparseMatrixXd & F, const MatrixXd & A)
{
  double s = 0.0;
  for (int k = 0; k < F.outerSize(); ++k) {
    for (SparseMatrixXd::InnerIterator it(F, k); it; ++it) { s += it.value() * A(it.row(), it.col()); }
  }
  return s;
}

/// tr(F A) for symmetric F: sum F(a,b) A(b,a)
double trace_product(const SparseMatrixXd & F, const MatrixXd & A)
{
  double s = 0.0;
  for (int k = 0; k < F.outerSize(); ++k) {
    for (SparseMatrixXd::InnerIterator it(F, k); it; ++it) { s += it.value() * A(it.col(), it.row()); }
  }
  return s;
}

/// Largest step t with A + t D >= 0, for A positive definite.
double max_step(const MatrixXd & A, const MatrixXd & D)
{
  Eigen::LLT<MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) { return 0.0; }
  const MatrixXd Linv = llt.matrixL().solve(MatrixXd::Identity(A.rows(), A.cols()));
  const MatrixXd W = symmetrized(Linv * D * Linv.transpose());
  const double lmin = Eigen::SelfAdjointEigenSolver<MatrixXd>(W, Eigen::EigenvaluesOnly).eigenvalues()(0);
  if (lmin >= 0.0) { return std::numeric_limits<double>::infinity(); }
  return -1.0 / lmin;
}

/// Restricts an LMI to the orthogonal complement of the common null space of F0 and all F_i.
AffineLmi facial_reduce(const AffineLmi & lmi)
{
  const int n = lmi.dim();
  int active = 0;
  for (const auto & Fi : lmi.F) { active += Fi.nonZeros() > 0 ? 1 : 0; }
  MatrixXd stacked(static_cast<Eigen::Index>(active + 1) * n, n);
  stacked.topRows(n) = lmi.F0;
  Eigen::Index row = n;
  for (const auto & Fi : lmi.F) {
    if (Fi.nonZeros() == 0) { continue; }
    stacked.middleRows(row, n) = MatrixXd(Fi);
    row += n;
  }
  const int rank = numerical_rank(stacked, 1e-10);
  if (rank == n || rank == 0) { return lmi; }
  const int drop = n - rank;
  const MatrixXd P = range_basis(stacked.transpose(), 1e-10);
  AffineLmi out;
  out.name = lmi.name;
  out.F0 = symmetrized(P.transpose() * lmi.F0 * P);
  out.F.reserve(lmi.F.size());
  for (const auto & Fi : lmi.F) {
    if (Fi.nonZeros() == 0) {
      out.F.emplace_back(n - drop, n - drop);
      continue;
    }
    MatrixXd D = symmetrized(P.transpose() * (Fi * P));
    const double scale = D.cwiseAbs().maxCoeff();
    out.F.push_back(D.sparseView(1.0, 1e-14 * scale));
  }
  return out;
}

class Solver
{
public:
  Solver(const SdpProblem & prob, const SolverOptions & opts) : prob_(prob), opts_(opts), m_(prob.num_vars)
  {
    reduced_.reserve(prob.constraints.size());
    for (const auto & lmi : prob.constraints) { reduced_.push_back(facial_reduce(lmi)); }
    for (const auto & lmi : reduced_) {
      Block b;
      b.lmi = &lmi;
      b.n = lmi.dim();
      for (int i = 0; i < m_; ++i) {
        const auto & F = lmi.F[static_cast<std::size_t>(i)];
        if (F.nonZeros() == 0) { continue; }
        Coefficient c{i, &F, {}};
        for (int k = 0; k < F.outerSize(); ++k) {
          if (F.col(k).nonZeros() > 0) { c.cols.push_back(k); }
        }
        b.coefs.push_back(std::move(c));
      }
      blocks_.push_back(std::move(b));
    }
    total_dim_ = 0;
    for (const auto & b : blocks_) { total_dim_ += b.n; }
    c_norm_ = prob.cost.size() ? prob.cost.norm() : 0.0;
    F0_norm_ = 0.0;
    for (const auto & b : blocks_) { F0_norm_ = std::max(F0_norm_, b.lmi->F0.norm()); }
  }

  // best iterate within 100x of the tolerances is accepted with reduced accuracy
  static SdpSolution stalled(SdpSolution cur, SdpSolution best, double best_merit, const std::string & reason)
  {
    if (best_merit <= 100.0) {
      best.iterations = cur.iterations;
      best.runtime = cur.runtime;
      best.status = SdpStatus::Optimal;
      best.message = fmt::format("{}; accepted near-optimal iterate (pinf {:.2e}, dinf {:.2e}, gap {:.2e})", reason,
                                 best.primal_infeasibility, best.dual_infeasibility, best.relative_gap);
      return best;
    }
    cur.status = SdpStatus::NumericalFailure;
    cur.message = fmt::format("{} (pinf {:.2e}, dinf {:.2e}, gap {:.2e})", reason, cur.primal_infeasibility,
                              cur.dual_infeasibility, cur.relative_gap);
    return cur;
  }

  SdpSolution run()
  {
    const auto t0 = std::chrono::steady_clock::now();
    SdpSolution sol;
    sol.z = VectorXd::Zero(m_);
    if (blocks_.empty()) {
      return finish_without_constraints(sol);
    }
    initialize();
    VectorXd z = VectorXd::Zero(m_);
    double best_merit = std::numeric_limits<double>::infinity();
    int best_iter = 0;
    SdpSolution best;

    for (int iter = 0;; ++iter) {
      sol.iterations = iter;
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      sol.runtime = elapsed;

      // residuals
      std::vector<MatrixXd> Rp(blocks_.size());
      double rp_norm = 0.0;
      for (std::size_t k = 0; k < blocks_.size(); ++k) {
        Rp[k] = blocks_[k].lmi->evaluate(z) - blocks_[k].S;
        rp_norm = std::max(rp_norm, Rp[k].norm());
      }
      VectorXd AX = VectorXd::Zero(m_);
      double dobj = 0.0;
      double xs = 0.0;
      for (const auto & b : blocks_) {
        for (const auto & c : b.coefs) { AX(c.var) += inner(*c.F, b.X); }
        dobj -= (b.lmi->F0.cwiseProduct(b.X)).sum();
        xs += (b.X.cwiseProduct(b.S)).sum();
      }
      const VectorXd rd = prob_.cost - AX;
      const double pobj = prob_.cost.dot(z);
      sol.primal_infeasibility = rp_norm / (1.0 + F0_norm_);
      sol.dual_infeasibility = rd.norm() / (1.0 + c_norm_);
      sol.relative_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
      sol.z = z;
      sol.objective = pobj;

      if (opts_.verbose) {
        fmt::print(stderr, "{:3d} pobj {:+.10e} dobj {:+.10e} pinf {:.2e} dinf {:.2e} gap {:.2e} mu {:.2e}\n", iter, pobj, dobj,
                   sol.primal_infeasibility, sol.dual_infeasibility, sol.relative_gap, xs / total_dim_);
      }
      if (sol.primal_infeasibility <= opts_.feas_tol && sol.dual_infeasibility <= opts_.feas_tol &&
          sol.relative_gap <= opts_.gap_tol) {
        sol.status = SdpStatus::Optimal;
        sol.message = fmt::format("converged in {} iterations", iter);
        return sol;
      }
      // certificate of LMI infeasibility: X >= 0, <F_i, X> = 0, <F0, X> < 0
      if (dobj > 0.0) {
        const double cert = AX.norm() / dobj;
        if (cert < 1e-8 && dobj > 1e6 * (1.0 + c_norm_)) {
          sol.status = SdpStatus::Infeasible;
          sol.message = fmt::format("infeasibility certificate found (normalized residual {:.2e})", cert);
          return sol;
        }
      }
      // certificate of unboundedness: direction z with c^T z < 0 and sum z_i F_i >= 0
      if (pobj < 0.0 && -pobj > 1e8 * (1.0 + F0_norm_) * (1.0 + c_norm_) && sol.primal_infeasibility < 1e-6) {
        sol.status = SdpStatus::Unbounded;
        sol.message = fmt::format("objective decreases without bound (c^T z = {:.3e})", pobj);
        return sol;
      }
      const double merit = std::max({sol.primal_infeasibility / opts_.feas_tol, sol.dual_infeasibility / opts_.feas_tol,
                                     sol.relative_gap / opts_.gap_tol});
      if (merit < 0.99 * best_merit) {
        best_merit = merit;
        best_iter = iter;
        best = sol;
      } else if (iter - best_iter >= 15) {
        return stalled(sol, best, best_merit, "stalled");
      }
      if (iter >= opts_.max_iter) {
        sol.status = SdpStatus::NumericalFailure;
        sol.message = fmt::format("iteration limit {} reached (pinf {:.2e}, dinf {:.2e}, gap {:.2e})", opts_.max_iter,
                                  sol.primal_infeasibility, sol.dual_infeasibility, sol.relative_gap);
        return sol;
      }
      if (elapsed > opts_.time_limit) {
        sol.status = SdpStatus::NumericalFailure;
        sol.message = fmt::format("time limit {:.1f}s reached", opts_.time_limit);
        return sol;
      }

      const double mu = xs / total_dim_;
      for (auto & b : blocks_) {
        Eigen::LLT<MatrixXd> llt(b.S);
        if (llt.info() != Eigen::Success) {
          return stalled(sol, best, best_merit, fmt::format("slack of '{}' lost positive definiteness", b.lmi->name));
        }
        b.Sinv = symmetrized(llt.solve(MatrixXd::Identity(b.n, b.n)));
      }

      MatrixXd Schur;
      if (!build_schur(Schur)) {
        sol.status = SdpStatus::NumericalFailure;
        sol.message = "Schur complement matrix is not positive definite";
        return sol;
      }
      Eigen::LDLT<MatrixXd> ldlt(Schur);
      schur_ = &Schur;

      // predictor
      std::vector<MatrixXd> corr(blocks_.size());
      for (std::size_t k = 0; k < blocks_.size(); ++k) { corr[k] = MatrixXd::Zero(blocks_[k].n, blocks_[k].n); }
      Direction aff = direction(ldlt, Rp, 0.0, mu, corr);
      double ap = std::min(1.0, step_primal(aff));
      double ad = std::min(1.0, step_dual(aff));
      double xs_aff = 0.0;
      for (std::size_t k = 0; k < blocks_.size(); ++k) {
        const auto & b = blocks_[k];
        xs_aff += ((b.X + ad * aff.dX[k]).cwiseProduct(b.S + ap * aff.dS[k])).sum();
      }
      const double mu_aff = xs_aff / total_dim_;
      const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

      // corrector
      for (std::size_t k = 0; k < blocks_.size(); ++k) { corr[k] = aff.dX[k] * aff.dS[k] * blocks_[k].Sinv; }
      Direction d = direction(ldlt, Rp, sigma, mu, corr);
      const double frac = 0.95;
      ap = std::min(1.0, frac * step_primal(d));
      ad = std::min(1.0, frac * step_dual(d));
      if (ap < 1e-12 && ad < 1e-12) {
        sol.status = SdpStatus::NumericalFailure;
        sol.message = "step length collapsed";
        return sol;
      }
      z += ap * d.dz;
      for (std::size_t k = 0; k < blocks_.size(); ++k) {
        auto & b = blocks_[k];
        b.S = symmetrized(b.S + ap * d.dS[k]);
        b.X = symmetrized(b.X + ad * d.dX[k]);
      }
    }
  }

private:
  struct Direction
  {
    VectorXd dz;
    std::vector<MatrixXd> dS, dX;
  };

  SdpSolution finish_without_constraints(SdpSolution & sol)
  {
    if (c_norm_ == 0.0) {
      sol.status = SdpStatus::Optimal;
      sol.message = "no constraints";
    } else {
      sol.status = SdpStatus::Unbounded;
      sol.message = "no constraints and a nonzero cost";
    }
    return sol;
  }

  void initialize()
  {
    double max_cost_ratio = 0.0;
    double max_F = 0.0;
    for (int i = 0; i < m_; ++i) {
      double fn = 0.0;
      for (const auto & b : blocks_) { fn += b.lmi->F[static_cast<std::size_t>(i)].squaredNorm(); }
      fn = std::sqrt(fn);
      max_F = std::max(max_F, fn);
      max_cost_ratio = std::max(max_cost_ratio, (1.0 + std::abs(prob_.cost(i))) / (1.0 + fn));
    }
    for (auto & b : blocks_) {
      const double sn = std::sqrt(static_cast<double>(b.n));
      const double xi = std::max({10.0, sn, b.n * max_cost_ratio});
      const double eta = std::max({10.0, sn, max_F, b.lmi->F0.norm()});
      b.X = xi * MatrixXd::Identity(b.n, b.n);
      b.S = eta * MatrixXd::Identity(b.n, b.n);
    }
  }

  bool build_schur(MatrixXd & M)
  {
    M = MatrixXd::Zero(m_, m_);
    for (auto & b : blocks_) {
      MatrixXd T;
      for (const auto & cj : b.coefs) {
        // G = X F_j S^{-1}, built from the nonzero columns of F_j
        T.setZero(b.n, static_cast<Eigen::Index>(cj.cols.size()));
        for (std::size_t q = 0; q < cj.cols.size(); ++q) {
          for (SparseMatrixXd::InnerIterator it(*cj.F, cj.cols[q]); it; ++it) {
            T.col(static_cast<Eigen::Index>(q)) += it.value() * b.X.col(it.row());
          }
        }
        MatrixXd Srows(static_cast<Eigen::Index>(cj.cols.size()), b.n);
        for (std::size_t q = 0; q < cj.cols.size(); ++q) { Srows.row(static_cast<Eigen::Index>(q)) = b.Sinv.row(cj.cols[q]); }
        const MatrixXd G = T * Srows;
        for (const auto & ci : b.coefs) { M(ci.var, cj.var) += trace_product(*ci.F, G); }
      }
    }
    M = symmetrized(M);
    const double scale = std::max(1.0, M.diagonal().cwiseAbs().maxCoeff());
    for (int i = 0; i < m_; ++i) {
      if (M(i, i) <= 0.0) { M(i, i) = 1e-14 * scale; }
    }
    Eigen::LLT<MatrixXd> llt(M);
    if (llt.info() != Eigen::Success) {
      M.diagonal().array() += 1e-13 * scale;
      llt.compute(M);
      return llt.info() == Eigen::Success;
    }
    return true;
  }

  Direction direction(const Eigen::LDLT<MatrixXd> & ldlt,
                      const std::vector<MatrixXd> & Rp,
                      double sigma,
                      double mu,
                      const std::vector<MatrixXd> & corr)
  {
    const std::size_t K = blocks_.size();
    std::vector<MatrixXd> W(K);
    VectorXd rhs = -prob_.cost;
    for (std::size_t k = 0; k < K; ++k) {
      const auto & b = blocks_[k];
      W[k] = sigma * mu * b.Sinv - b.X * Rp[k] * b.Sinv - corr[k];
      for (const auto & c : b.coefs) { rhs(c.var) += trace_product(*c.F, W[k]); }
    }
    Direction d;
    d.dz = ldlt.solve(rhs);
    for (int r = 0; r < 3; ++r) {
      const VectorXd res = rhs - (*schur_) * d.dz;
      if (res.norm() <= 1e-15 * rhs.norm()) { break; }
      d.dz += ldlt.solve(res);
    }
    d.dS.resize(K);
    d.dX.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
      const auto & b = blocks_[k];
      MatrixXd dS = Rp[k];
      for (const auto & c : b.coefs) { dS += d.dz(c.var) * (*c.F); }
      d.dS[k] = symmetrized(dS);
      d.dX[k] = symmetrized(sigma * mu * b.Sinv - b.X - b.X * d.dS[k] * b.Sinv - corr[k]);
    }
    return d;
  }

  double step_primal(const Direction & d) const
  {
    double a = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < blocks_.size(); ++k) { a = std::min(a, max_step(blocks_[k].S, d.dS[k])); }
    return a;
  }

  double step_dual(const Direction & d) const
  {
    double a = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < blocks_.size(); ++k) { a = std::min(a, max_step(blocks_[k].X, d.dX[k])); }
    return a;
  }

  const SdpProblem & prob_;
  SolverOptions opts_;
  std::vector<AffineLmi> reduced_;
  const MatrixXd * schur_{nullptr};
  int m_;
  std::vector<Block> blocks_;
  int total_dim_{0};
  double c_norm_{0.0};
  double F0_norm_{0.0};
};

}  // namespace

namespace {

// min t s.t. F(z) + t I >= 0, t >= -1; strictly feasible by construction
SdpSolution phase_one(const SdpProblem & prob, const SolverOptions & opts)
{
  SdpProblem aux;
  aux.num_vars = prob.num_vars + 1;
  aux.cost = VectorXd::Zero(aux.num_vars);
  aux.cost(prob.num_vars) = 1.0;
  for (const auto & lmi : prob.constraints) {
    AffineLmi a = lmi;
    SparseMatrixXd I(lmi.dim(), lmi.dim());
    I.setIdentity();
    a.F.push_back(I);
    aux.constraints.push_back(std::move(a));
  }
  LmiBuilder lb("t>=-1", 1, aux.num_vars);
  lb.add(prob.num_vars, 0, 0, 1.0);
  lb.add(-1, 0, 0, 1.0);
  aux.constraints.push_back(lb.build());
  Solver s(aux, opts);
  return s.run();
}

}  // namespace

SdpSolution solve(const SdpProblem & prob, const SolverOptions & opts)
{
  prob.validate();
  Solver s(prob, opts);
  SdpSolution sol = s.run();
  if (sol.status != SdpStatus::NumericalFailure || prob.constraints.empty()) { return sol; }

  // settle feasibility with a phase-I problem
  const SdpSolution p1 = phase_one(prob, opts);
  if (p1.status != SdpStatus::Optimal) { return sol; }
  double scale = 0.0;
  for (const auto & lmi : prob.constraints) { scale = std::max(scale, lmi.F0.norm()); }
  const double t_star = p1.objective;
  sol.iterations += p1.iterations;
  sol.runtime += p1.runtime;
  if (t_star > 10.0 * opts.feas_tol * (1.0 + scale)) {
    sol.status = SdpStatus::Infeasible;
    sol.message = fmt::format("LMIs infeasible: smallest uniform shift restoring feasibility is {:.3e} ({})", t_star, sol.message);
  } else {
    sol.message += fmt::format("; phase-I shift {:.3e}", t_star);
  }
  return sol;
}

VerificationReport verify_solution(const SdpProblem & prob, const VectorXd & z, double tol)
{
  prob.validate();
  if (z.size() != prob.num_vars) {
    throw DimensionError(fmt::format("verify_solution: z has {} entries for {} variables", z.size(), prob.num_vars));
  }
  VerificationReport rep;
  rep.cost = prob.cost.dot(z);
  rep.pass = true;
  for (const auto & lmi : prob.constraints) {
    const double lmin = min_eigenvalue(lmi.evaluate(z));
    rep.min_eigenvalues.push_back(lmin);
    if (lmin < -tol * (1.0 + lmi.F0.norm())) { rep.pass = false; }
  }
  return rep;
}

void write_sdpa(const SdpProblem & prob, std::ostream & os)
{
  prob.validate();
  os << "* ddrt SDP export: min c^T x s.t. sum_i x_i F_i - (-F0) >= 0\n";
  os << prob.num_vars << "\n" << prob.constraints.size() << "\n";
  for (std::size_t k = 0; k < prob.constraints.size(); ++k) { os << prob.constraints[k].dim() << (k + 1 < prob.constraints.size() ? " " : "\n"); }
  for (int i = 0; i < prob.num_vars; ++i) { os << fmt::format("{:.17g}", prob.cost(i)) << (i + 1 < prob.num_vars ? " " : "\n"); }
  for (std::size_t k = 0; k < prob.constraints.size(); ++k) {
    const auto & lmi = prob.constraints[k];
    for (int c = 0; c < lmi.dim(); ++c) {
      for (int r = 0; r <= c; ++r) {
        if (lmi.F0(r, c) != 0.0) { os << fmt::format("0 {} {} {} {:.17g}\n", k + 1, r + 1, c + 1, -lmi.F0(r, c)); }
      }
    }
  }
  for (int i = 0; i < prob.num_vars; ++i) {
    for (std::size_t k = 0; k < prob.constraints.size(); ++k) {
      const auto & F = prob.constraints[k].F[static_cast<std::size_t>(i)];
      for (int c = 0; c < F.outerSize(); ++c) {
        for (SparseMatrixXd::InnerIterator it(F, c); it; ++it) {
          if (it.row() <= it.col()) { os << fmt::format("{} {} {} {} {:.17g}\n", i + 1, k + 1, it.row() + 1, it.col() + 1, it.value()); }
        }
      }
    }
  }
}

}  // namespace ddrt
