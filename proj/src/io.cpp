#include "ddrt/io.hpp"

#include "ddrt/config.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace ddrt {

namespace {

std::vector<std::string> split_csv(const std::string & line)
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) { out.push_back(cell); }
  if (!line.empty() && line.back() == ',') { out.emplace_back(); }
  return out;
}

double parse_number(const std::string & s, const std::filesystem::path & path, int line)
{
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception &) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) {
    throw DimensionError(fmt::format("{}:{}: '{}' is not a number", path.string(), line, s));
  }
  return v;
}

}  // namespace

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

void write_trajectory_csv(const std::filesystem::path & path, const TrajectoryData & data)
{
  std::string text = "k";
  for (int i = 1; i <= data.m(); ++i) { text += fmt::format(",u_{}", i); }
  for (int i = 1; i <= data.p(); ++i) { text += fmt::format(",y_{}", i); }
  text += "\n";
  for (int k = 0; k < data.length(); ++k) {
    text += std::to_string(k);
    for (int i = 0; i < data.m(); ++i) { text += "," + format_double(data.inputs()(i, k)); }
    for (int i = 0; i < data.p(); ++i) { text += "," + format_double(data.outputs()(i, k)); }
    text += "\n";
  }
  write_text_file(path, text);
}

TrajectoryData read_trajectory_csv(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) { throw Error(fmt::format("cannot open '{}'", path.string())); }
  std::string line;
  if (!std::getline(in, line)) { throw DimensionError(fmt::format("{}: empty file", path.string())); }
  const auto header = split_csv(line);
  if (header.empty() || header[0] != "k") { throw DimensionError(fmt::format("{}: header must start with 'k'", path.string())); }
  int m = 0, p = 0;
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i] == fmt::format("u_{}", m + 1) && p == 0) {
      ++m;
    } else if (header[i] == fmt::format("y_{}", p + 1)) {
      ++p;
    } else {
      throw DimensionError(fmt::format("{}: unexpected column '{}'", path.string(), header[i]));
    }
  }
  if (m == 0 || p == 0) { throw DimensionError(fmt::format("{}: need at least one u and one y column", path.string())); }

  std::vector<VectorXd> us, ys;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) { continue; }
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw DimensionError(fmt::format("{}:{}: {} cells, expected {}", path.string(), lineno, cells.size(), header.size()));
    }
    const double k = parse_number(cells[0], path, lineno);
    if (k != static_cast<double>(us.size())) {
      throw DimensionError(fmt::format("{}:{}: k = {} but expected {}", path.string(), lineno, cells[0], us.size()));
    }
    VectorXd u(m), y(p);
    for (int i = 0; i < m; ++i) { u(i) = parse_number(cells[static_cast<std::size_t>(1 + i)], path, lineno); }
    for (int i = 0; i < p; ++i) { y(i) = parse_number(cells[static_cast<std::size_t>(1 + m + i)], path, lineno); }
    us.push_back(u);
    ys.push_back(y);
  }
  return TrajectoryData::from_sequences(us, ys);
}

Json to_json(const MatrixXd & M)
{
  Json j = Json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) { row.push_back(M(r, c)); }
    j.push_back(std::move(row));
  }
  return j;
}

Json to_json(const VectorXd & v)
{
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) { j.push_back(v(i)); }
  return j;
}

Json to_json(const QuadraticForm & f)
{
  return Json{{"c", f.c}, {"b", to_json(VectorXd(f.b.transpose()))}, {"F", to_json(f.F)}};
}

MatrixXd matrix_from_json(const Json & j)
{
  if (!j.is_array()) { throw DimensionError("matrix must be an array of rows"); }
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) { return MatrixXd(0, 0); }
  if (!j[0].is_array()) { throw DimensionError("matrix must be an array of rows"); }
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  MatrixXd M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto & row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw DimensionError(fmt::format("matrix row {} has the wrong length", r));
    }
    for (Eigen::Index c = 0; c < cols; ++c) { M(r, c) = row[static_cast<std::size_t>(c)].get<double>(); }
  }
  return M;
}

VectorXd vector_from_json(const Json & j)
{
  if (!j.is_array()) { throw DimensionError("vector must be an array"); }
  VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) { v(static_cast<Eigen::Index>(i)) = j[i].get<double>(); }
  return v;
}

Json plant_to_json(const StateSpacePlant & plant)
{
  return Json{{"A", to_json(plant.A())}, {"B", to_json(plant.B())}, {"C", to_json(plant.C())}, {"D", to_json(plant.D())}};
}

StateSpacePlant plant_from_json(const Json & j)
{
  for (const char * key : {"A", "B", "C"}) {
    if (!j.contains(key)) { throw DimensionError(fmt::format("plant: missing matrix '{}'", key)); }
  }
  const MatrixXd A = matrix_from_json(j.at("A"));
  const MatrixXd B = matrix_from_json(j.at("B"));
  const MatrixXd C = matrix_from_json(j.at("C"));
  const MatrixXd D = j.contains("D") ? matrix_from_json(j.at("D")) : MatrixXd::Zero(C.rows(), B.cols());
  return StateSpacePlant(A, B, C, D);
}

Json to_json(const PeReport & r)
{
  return Json{{"is_pe", r.is_pe}, {"rank", r.rank}, {"required_rank", r.required_rank}, {"columns", r.columns}};
}

Json solution_to_json(const RobustSolution & sol, Mode mode)
{
  Json alpha = Json::object();
  for (const auto & [k, v] : sol.multipliers) { alpha[k] = v; }
  Json j;
  j["mode"] = to_string(mode);
  j["status"] = to_string(sol.status);
  j["verified"] = sol.verified;
  j["u"] = to_json(sol.u);
  j["gamma_star"] = sol.gamma_star;
  j["alpha"] = alpha;
  j["solver"] = Json{{"iterations", sol.iterations}, {"solve_time", sol.solve_time}, {"message", sol.message}};
  j["fingerprint"] = Json{{"T_ini", sol.T_ini}, {"T_f", sol.T_f}, {"m", sol.m}, {"p", sol.p},
                          {"data_hash", fmt::format("{:016x}", sol.data_hash)}};
  return j;
}

RobustSolution solution_from_json(const Json & j)
{
  RobustSolution sol;
  sol.u = vector_from_json(j.at("u"));
  sol.gamma_star = j.at("gamma_star").get<double>();
  if (j.contains("alpha")) {
    for (const auto & [k, v] : j.at("alpha").items()) { sol.multipliers[k] = v.get<double>(); }
  }
  const std::string st = j.value("status", std::string("numerical_failure"));
  sol.status = st == "optimal"      ? SdpStatus::Optimal
               : st == "infeasible" ? SdpStatus::Infeasible
               : st == "unbounded"  ? SdpStatus::Unbounded
                                    : SdpStatus::NumericalFailure;
  sol.verified = j.value("verified", false);
  if (j.contains("solver")) {
    const auto & s = j.at("solver");
    sol.iterations = s.value("iterations", 0);
    sol.solve_time = s.value("solve_time", 0.0);
    sol.message = s.value("message", std::string());
  }
  if (j.contains("fingerprint")) {
    const auto & f = j.at("fingerprint");
    sol.T_ini = f.value("T_ini", 0);
    sol.T_f = f.value("T_f", 0);
    sol.m = f.value("m", 0);
    sol.p = f.value("p", 0);
    if (f.contains("data_hash")) { sol.data_hash = std::stoull(f.at("data_hash").get<std::string>(), nullptr, 16); }
  }
  return sol;
}

Json read_json_file(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) { throw Error(fmt::format("cannot open '{}'", path.string())); }
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error & e) {
    throw DimensionError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_json_file(const std::filesystem::path & path, const Json & j) { write_text_file(path, j.dump(2) + "\n"); }

void write_text_file(const std::filesystem::path & path, const std::string & text)
{
  if (path.has_parent_path()) { std::filesystem::create_directories(path.parent_path()); }
  std::ofstream out(path, std::ios::binary);
  if (!out) { throw Error(fmt::format("cannot write '{}'", path.string())); }
  out << text;
}

}  // namespace ddrt
