#pragma once

/**
 * @file
 * @brief CSV and JSON serialization of trajectories, plants, forms and solutions.
 */

#include "controller.hpp"
#include "plant.hpp"
#include "quadratic_form.hpp"
#include "trajectory.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace ddrt {

using Json = nlohmann::ordered_json;

/// Decimal text with 17 significant digits.
std::string format_double(double v);

/// `k,u_1..u_m,y_1..y_p` with one row per sample.
void write_trajectory_csv(const std::filesystem::path & path, const TrajectoryData & data);
/// Throws DimensionError on a bad header, ragged rows, non-numeric cells or non-consecutive k.
TrajectoryData read_trajectory_csv(const std::filesystem::path & path);

Json to_json(const MatrixXd & M);
Json to_json(const VectorXd & v);
Json to_json(const QuadraticForm & f);
MatrixXd matrix_from_json(const Json & j);
VectorXd vector_from_json(const Json & j);

Json plant_to_json(const StateSpacePlant & plant);
/// Keys A, B, C and optional D (zero by default).
StateSpacePlant plant_from_json(const Json & j);

Json to_json(const PeReport & r);
Json solution_to_json(const RobustSolution & sol, Mode mode);
/// Inverse of solution_to_json for the fields needed by validation (u, gamma_star, alpha, mode).
RobustSolution solution_from_json(const Json & j);

Json read_json_file(const std::filesystem::path & path);
void write_json_file(const std::filesystem::path & path, const Json & j);
void write_text_file(const std::filesystem::path & path, const std::string & text);

}  // namespace ddrt
