#pragma once

/**
 * @file
 * @brief Finite input/output trajectories and their Hankel-matrix representation.
 */

#include "linalg.hpp"

#include <vector>

namespace ddrt {

/**
 * @brief Input/output sequences of equal length.
 *
 * Stored column-major as (dimension x time) matrices: column k holds the
 * sample at time k.
 */
class TrajectoryData
{
public:
  TrajectoryData() = default;

  /// From (m x T) and (p x T) matrices. Throws DimensionError on length mismatch or T = 0.
  TrajectoryData(MatrixXd inputs, MatrixXd outputs);

  /// From sequences of vectors. Throws DimensionError on ragged or mismatched sequences.
  static TrajectoryData from_sequences(const std::vector<VectorXd> & inputs, const std::vector<VectorXd> & outputs);

  int m() const { return static_cast<int>(u_.rows()); }
  int p() const { return static_cast<int>(y_.rows()); }
  int length() const { return static_cast<int>(u_.cols()); }

  const MatrixXd & inputs() const { return u_; }
  const MatrixXd & outputs() const { return y_; }

  VectorXd input(int k) const { return u_.col(k); }
  VectorXd output(int k) const { return y_.col(k); }

  /// col(u_0, ..., u_{T-1})
  VectorXd stacked_inputs() const;
  /// col(y_0, ..., y_{T-1})
  VectorXd stacked_outputs() const;

  /// Samples [start, start + len).
  TrajectoryData window(int start, int len) const;

private:
  MatrixXd u_;
  MatrixXd y_;
};

/// Reshape a stacked vector col(v_0, ..., v_{T-1}) into a (q x T) matrix.
MatrixXd unstack(const VectorXd & v, int q);

/// col(v_0, ..., v_{T-1}) of a (q x T) matrix.
VectorXd stack(const MatrixXd & seq);

/// Depth-L block Hankel matrix of a (q x T) sequence, size (L q) x (T - L + 1).
MatrixXd build_hankel(const MatrixXd & seq, int depth);

/// Depth-L block Hankel matrix of a sequence of q-vectors.
MatrixXd build_hankel(const std::vector<VectorXd> & seq, int depth);

struct PeReport
{
  bool is_pe{false};
  int rank{0};
  int required_rank{0};
  int columns{0};
};

/// Persistency-of-excitation diagnostic: full row rank of the depth-L Hankel matrix.
PeReport check_persistent_excitation(const MatrixXd & seq, int order, double rank_tol = kDefaultRankTol);

/**
 * @brief Past/future partition of the depth-(T_ini + T_f) Hankel matrices.
 *
 * [U_p; U_f] = H_{T_ini+T_f}(u), [Y_p; Y_f] = H_{T_ini+T_f}(y).
 */
struct HankelBlocks
{
  MatrixXd Up;
  MatrixXd Yp;
  MatrixXd Uf;
  MatrixXd Yf;
  int T_ini{0};
  int T_f{0};
  int m{0};
  int p{0};

  int columns() const { return static_cast<int>(Up.cols()); }
};

HankelBlocks partition_blocks(const TrajectoryData & hist, int T_ini, int T_f);

}  // namespace ddrt
