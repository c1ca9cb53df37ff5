#include "ddrt/trajectory.hpp"

#include <fmt/format.h>

namespace ddrt {

TrajectoryData::TrajectoryData(MatrixXd inputs, MatrixXd outputs) : u_(std::move(inputs)), y_(std::move(outputs))
{
  if (u_.cols() != y_.cols()) {
    throw DimensionError(
      fmt::format("TrajectoryData: {} input samples but {} output samples", u_.cols(), y_.cols()));
  }
  if (u_.cols() == 0) { throw DimensionError("TrajectoryData: empty trajectory"); }
  if (u_.rows() == 0 || y_.rows() == 0) { throw DimensionError("TrajectoryData: zero input or output dimension"); }
}

TrajectoryData TrajectoryData::from_sequences(const std::vector<VectorXd> & inputs, const std::vector<VectorXd> & outputs)
{
  if (inputs.size() != outputs.size() || inputs.empty()) {
    throw DimensionError(
      fmt::format("TrajectoryData: sequence lengths {} and {} must match and be nonzero", inputs.size(), outputs.size()));
  }
  const auto m = inputs.front().size();
  const auto p = outputs.front().size();
  MatrixXd u(m, inputs.size()), y(p, outputs.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (inputs[k].size() != m || outputs[k].size() != p) {
      throw DimensionError(fmt::format("TrajectoryData: ragged sample at k = {}", k));
    }
    u.col(k) = inputs[k];
    y.col(k) = outputs[k];
  }
  return TrajectoryData(std::move(u), std::move(y));
}

VectorXd TrajectoryData::stacked_inputs() const { return stack(u_); }

VectorXd TrajectoryData::stacked_outputs() const { return stack(y_); }

TrajectoryData TrajectoryData::window(int start, int len) const
{
  if (start < 0 || len < 1 || start + len > length()) {
    throw DimensionError(fmt::format("TrajectoryData::window: [{}, {}) outside length {}", start, start + len, length()));
  }
  return TrajectoryData(u_.middleCols(start, len), y_.middleCols(start, len));
}

MatrixXd unstack(const VectorXd & v, int q)
{
  if (q <= 0 || v.size() % q != 0) {
    throw DimensionError(fmt::format("unstack: length {} not a multiple of {}", v.size(), q));
  }
  return Eigen::Map<const MatrixXd>(v.data(), q, v.size() / q);
}

VectorXd stack(const MatrixXd & seq) { return Eigen::Map<const VectorXd>(seq.data(), seq.size()); }

MatrixXd build_hankel(const MatrixXd & seq, int depth)
{
  const int T = static_cast<int>(seq.cols());
  const int q = static_cast<int>(seq.rows());
  if (depth < 1 || depth > T) {
    throw DimensionError(fmt::format("build_hankel: depth L = {} must satisfy 1 <= L <= T_d = {}", depth, T));
  }
  const int cols = T - depth + 1;
  MatrixXd H(depth * q, cols);
  for (int i = 0; i < depth; ++i) {
    H.middleRows(i * q, q) = seq.middleCols(i, cols);
  }
  return H;
}

MatrixXd build_hankel(const std::vector<VectorXd> & seq, int depth)
{
  if (seq.empty()) { throw DimensionError("build_hankel: empty sequence"); }
  MatrixXd m(seq.front().size(), seq.size());
  for (std::size_t k = 0; k < seq.size(); ++k) {
    if (seq[k].size() != m.rows()) { throw DimensionError(fmt::format("build_hankel: ragged sample at k = {}", k)); }
    m.col(k) = seq[k];
  }
  return build_hankel(m, depth);
}

PeReport check_persistent_excitation(const MatrixXd & seq, int order, double rank_tol)
{
  if (seq.cols() == 0) { throw DimensionError("check_persistent_excitation: empty sequence"); }
  const MatrixXd H = build_hankel(seq, order);
  PeReport rep;
  rep.required_rank = static_cast<int>(H.rows());
  rep.columns = static_cast<int>(H.cols());
  rep.rank = numerical_rank(H, rank_tol);
  rep.is_pe = rep.rank == rep.required_rank;
  return rep;
}

HankelBlocks partition_blocks(const TrajectoryData & hist, int T_ini, int T_f)
{
  if (T_ini < 1 || T_f < 1) {
    throw DimensionError(fmt::format("partition_blocks: T_ini = {} and T_f = {} must be positive", T_ini, T_f));
  }
  if (T_ini + T_f > hist.length()) {
    throw DimensionError(
      fmt::format("partition_blocks: T_ini + T_f = {} exceeds data length T_d = {}", T_ini + T_f, hist.length()));
  }
  const int L = T_ini + T_f;
  const MatrixXd U = build_hankel(hist.inputs(), L);
  const MatrixXd Y = build_hankel(hist.outputs(), L);
  HankelBlocks b;
  b.m = hist.m();
  b.p = hist.p();
  b.T_ini = T_ini;
  b.T_f = T_f;
  b.Up = U.topRows(T_ini * b.m);
  b.Uf = U.bottomRows(T_f * b.m);
  b.Yp = Y.topRows(T_ini * b.p);
  b.Yf = Y.bottomRows(T_f * b.p);
  return b;
}

}  // namespace ddrt
