#include "ddrt/quadratic_form.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

namespace ddrt {

QuadraticForm::QuadraticForm(double c_, RowVectorXd b_, MatrixXd F_) : c(c_), b(std::move(b_)), F(std::move(F_))
{
  if (F.rows() != F.cols() || b.size() != F.rows()) {
    throw DimensionError(fmt::format("QuadraticForm: b has {} entries, F is {}x{}", b.size(), F.rows(), F.cols()));
  }
  F = symmetrized(F);
}

QuadraticForm QuadraticForm::energy_bound(double c, int dim)
{
  return QuadraticForm(c, RowVectorXd::Zero(dim), -MatrixXd::Identity(dim, dim));
}

QuadraticForm QuadraticForm::constant(double c) { return QuadraticForm(c, RowVectorXd(0), MatrixXd(0, 0)); }

double QuadraticForm::evaluate(const VectorXd & x) const
{
  if (x.size() != dim()) {
    throw DimensionError(fmt::format("QuadraticForm::evaluate: vector of size {} for a form of dim {}", x.size(), dim()));
  }
  return c + 2.0 * b.dot(x) + x.dot(F * x);
}

MatrixXd QuadraticForm::matrix() const
{
  const int n = dim();
  MatrixXd M(n + 1, n + 1);
  M(0, 0) = c;
  M.block(0, 1, 1, n) = b;
  M.block(1, 0, n, 1) = b.transpose();
  M.block(1, 1, n, n) = F;
  return M;
}

bool QuadraticForm::is_bounded() const { return dim() == 0 || max_eigenvalue(F) < 0.0; }

QuadraticForm & QuadraticForm::operator+=(const QuadraticForm & o)
{
  if (o.dim() != dim()) { throw DimensionError("QuadraticForm: adding forms of different dimension"); }
  c += o.c;
  b += o.b;
  F += o.F;
  return *this;
}

QuadraticForm QuadraticForm::operator*(double s) const { return QuadraticForm(s * c, s * b, s * F); }

QuadraticForm pullback(const QuadraticForm & outer, const MatrixXd & map, const VectorXd & offset)
{
  if (map.rows() != outer.dim() || offset.size() != outer.dim()) {
    throw DimensionError(fmt::format(
      "pullback: map is {}x{}, offset {}, outer form dim {}", map.rows(), map.cols(), offset.size(), outer.dim()));
  }
  const RowVectorXd lin = outer.b + offset.transpose() * outer.F;
  return QuadraticForm(outer.c + 2.0 * outer.b.dot(offset) + offset.dot(outer.F * offset),
                       lin * map,
                       map.transpose() * outer.F * map);
}

Ellipsoid to_ellipsoid(const QuadraticForm & form)
{
  const int n = form.dim();
  Ellipsoid e;
  if (n == 0) {
    if (form.c < 0.0) { throw FeasibilityError(fmt::format("empty feasible set: constant form {}", form.c)); }
    e.center = VectorXd(0);
    e.shape = MatrixXd(0, 0);
    e.slack = form.c;
    return e;
  }
  Eigen::LLT<MatrixXd> llt(-form.F);
  if (llt.info() != Eigen::Success) {
    throw DimensionError("to_ellipsoid: form is not bounded (F is not negative definite)");
  }
  e.center = llt.solve(form.b.transpose());
  e.slack = form.c + form.b.dot(e.center);
  const double scale = std::max(1.0, std::abs(form.c) + form.b.norm() * e.center.norm());
  if (e.slack < -1e-12 * scale) {
    throw FeasibilityError(fmt::format("empty feasible set: slack {} at the ellipsoid center", e.slack));
  }
  const double rho = std::max(0.0, e.slack);
  // L^{-T} * sqrt(rho)
  const MatrixXd Lt = llt.matrixU();
  e.shape = Lt.triangularView<Eigen::Upper>().solve(MatrixXd::Identity(n, n)) * std::sqrt(rho);
  return e;
}

double origin_ball_radius(const QuadraticForm & form)
{
  if (form.dim() == 0) { return form.c >= 0.0 ? std::numeric_limits<double>::infinity() : 0.0; }
  if (form.c < 0.0) { return 0.0; }
  // c - 2 |b| rho - lam rho^2 >= 0 with lam = lambda_max(-F)
  const double lam = std::max(0.0, max_eigenvalue(-form.F));
  const double bn = form.b.norm();
  if (lam == 0.0) { return bn == 0.0 ? std::numeric_limits<double>::infinity() : form.c / (2.0 * bn); }
  return (-bn + std::sqrt(bn * bn + lam * form.c)) / lam;
}

VectorXd sample_unit_ball(int dim, std::mt19937_64 & rng)
{
  if (dim == 0) { return VectorXd(0); }
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  VectorXd v(dim);
  double nrm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) { v(i) = normal(rng); }
    nrm = v.norm();
  } while (nrm == 0.0);
  const double radius = std::pow(unif(rng), 1.0 / dim);
  return v * (radius / nrm);
}

VectorXd sample_in_ellipsoid(const QuadraticForm & form, std::mt19937_64 & rng)
{
  const Ellipsoid e = to_ellipsoid(form);
  // shrink slightly so boundary samples stay feasible after rounding
  return e.center + e.shape * (sample_unit_ball(form.dim(), rng) * (1.0 - 1e-10));
}

VectorXd interior_point(std::span<const QuadraticForm> forms)
{
  if (forms.empty()) { throw DimensionError("interior_point: no forms"); }
  const int n = forms.front().dim();
  for (const auto & f : forms) {
    if (f.dim() != n) { throw DimensionError("interior_point: forms have different dimensions"); }
  }
  auto worst = [&](const VectorXd & x) {
    double v = std::numeric_limits<double>::infinity();
    for (const auto & f : forms) { v = std::min(v, f.evaluate(x)); }
    return v;
  };
  double scale = 0.0;
  for (const auto & f : forms) { scale = std::max(scale, std::abs(f.c) + f.b.norm() + f.F.norm()); }
  scale = std::max(scale, 1e-300);

  // exponentiated-gradient descent on lambda -> max_x sum lambda_j f_j(x) over the simplex
  const auto k = forms.size();
  VectorXd lambda = VectorXd::Constant(static_cast<Eigen::Index>(k), 1.0 / static_cast<double>(k));
  VectorXd best;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < 2000; ++it) {
    QuadraticForm comb = forms.front() * lambda(0);
    for (std::size_t j = 1; j < k; ++j) { comb += forms[j] * lambda(static_cast<Eigen::Index>(j)); }
    Eigen::LLT<MatrixXd> llt(-comb.F);
    if (llt.info() == Eigen::Success) {
      const VectorXd x = llt.solve(comb.b.transpose());
      const double v = worst(x);
      if (v > best_val) {
        best_val = v;
        best = x;
      }
      if (v > 1e-9 * scale && (k == 1 || it > 50)) { break; }
      for (std::size_t j = 0; j < k; ++j) {
        lambda(static_cast<Eigen::Index>(j)) *= std::exp(-0.5 * forms[j].evaluate(x) / scale);
      }
    } else {
      lambda = 0.5 * lambda + VectorXd::Constant(lambda.size(), 0.5 / static_cast<double>(k));
    }
    lambda /= lambda.sum();
  }
  if (best.size() == 0 || best_val < 0.0) {
    throw FeasibilityError(fmt::format("interior_point: no feasible point found (best worst-case value {:.3e})", best_val));
  }
  return best;
}

std::vector<VectorXd> sample_feasible(std::span<const QuadraticForm> forms, int count, std::uint64_t seed)
{
  if (forms.empty()) { throw DimensionError("sample_feasible: no forms"); }
  std::vector<VectorXd> out;
  if (count <= 0) { return out; }
  out.reserve(static_cast<std::size_t>(count));
  std::mt19937_64 rng(seed);

  if (forms.size() == 1) {
    for (int i = 0; i < count; ++i) { out.push_back(sample_in_ellipsoid(forms.front(), rng)); }
    return out;
  }

  QuadraticForm sum = forms.front();
  for (std::size_t i = 1; i < forms.size(); ++i) { sum += forms[i]; }
  const Ellipsoid e = to_ellipsoid(sum);
  const VectorXd xc = interior_point(forms);

  for (int i = 0; i < count; ++i) {
    const VectorXd y = e.center + e.shape * sample_unit_ball(sum.dim(), rng);
    const VectorXd v = y - xc;
    // largest t in [0, 1] keeping every form nonnegative along xc + t v
    double tmax = 1.0;
    for (const auto & f : forms) {
      const double a = v.dot(f.F * v);
      const double b = (f.b + xc.transpose() * f.F).dot(v);
      const double c = f.evaluate(xc);
      if (c + 2.0 * b + a >= 0.0) { continue; }
      double t = 0.0;
      if (a < 0.0) {
        t = (-b - std::sqrt(std::max(0.0, b * b - a * c))) / a;
      } else if (b < 0.0) {
        t = -c / (2.0 * b);
      }
      tmax = std::min(tmax, std::max(0.0, t));
    }
    VectorXd x = xc + v * (tmax * (1.0 - 1e-10));
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace ddrt
