#pragma once

/**
 * @file
 * @brief Experiment configuration (JSON) and the benchmark preset.
 */

#include "controller.hpp"
#include "io.hpp"
#include "lmi.hpp"
#include "plant.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace ddrt {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr const char * kLibraryVersion = "1.0.0";

enum class RecentStart
{
  Fresh,     ///< standard-normal state drawn from the recent-data seed
  Continue,  ///< final state of the historical run
};

struct ExperimentConfig
{
  int schema_version{kConfigSchemaVersion};
  MatrixXd A, B, C, D;
  int T_d{0};
  int T_ini{0};
  int T_f{0};
  std::uint64_t seed{0};
  UniformInputLaw input_law{};
  double epsilon{0.0};                        ///< noise: Phi_11 = T_ini p epsilon, Phi_22 = -I
  std::optional<double> disturbance_epsilon;  ///< Phi_d,11 = (T_ini + T_f) m epsilon_d
  std::optional<double> epsilon_u;            ///< Psi_11 = T_f epsilon_u, Psi_22 = -I
  std::optional<double> epsilon_y;            ///< Theta_11 = T_f epsilon_y, Theta_22 = -I
  MatrixXd Q, R;
  VectorXd r;
  Mode mode{Mode::Theorem3};
  SolverOptions solver{};
  RecentStart recent_start{RecentStart::Fresh};
  double rank_tol{kDefaultRankTol};
  int steps{20};
  std::uint64_t hash{0};  ///< FNV-1a of the canonical JSON

  int m() const { return static_cast<int>(B.cols()); }
  int p() const { return static_cast<int>(C.rows()); }

  StateSpacePlant plant() const;
  TrackingProblem problem() const;
  QuadraticForm noise_law() const;
  std::optional<QuadraticForm> disturbance_law() const;
  SynthesisOptions synthesis_options() const;

  /// Horizon and dimension checks; throws DimensionError.
  void validate() const;
  Json to_json() const;
};

/// Parses a config object; relative plant paths resolve against base_dir.
ExperimentConfig parse_config(const Json & j, const std::filesystem::path & base_dir = {});
ExperimentConfig load_config(const std::filesystem::path & path);

/// The unstable 4-state, 3-input, 2-output benchmark with T_d = 110, T_ini = 6, T_f = 20.
ExperimentConfig benchmark_config();
MatrixXd benchmark_A();
MatrixXd benchmark_B();
MatrixXd benchmark_C();

/// Energy bound sum of squares <= dim * eps on a vector of dimension dim.
QuadraticForm energy_law(int dim, double per_entry);

/// Historical run plus a recent window under the configured noise and disturbance laws.
struct ExperimentData
{
  GeneratedTrajectory historical;
  RecentData recent;
};
ExperimentData generate_experiment_data(const ExperimentConfig & cfg);

}  // namespace ddrt
