#include "ddrt/config.hpp"

#include "ddrt/hash.hpp"

#include <fmt/format.h>

namespace ddrt {

namespace {

MatrixXd square_from_json(const Json & j, int n, const char * name)
{
  if (j.is_string() && j.get<std::string>() == "identity") { return MatrixXd::Identity(n, n); }
  if (j.is_number()) { return j.get<double>() * MatrixXd::Identity(n, n); }
  const MatrixXd M = matrix_from_json(j);
  if (M.rows() != n || M.cols() != n) {
    throw DimensionError(fmt::format("config: {} must be {}x{}, got {}x{}", name, n, n, M.rows(), M.cols()));
  }
  return M;
}

std::optional<double> optional_epsilon(const Json & j, const char * section, const char * key)
{
  if (!j.contains(section) || j.at(section).is_null()) { return std::nullopt; }
  const auto & s = j.at(section);
  if (s.contains("enabled") && !s.at("enabled").get<bool>()) { return std::nullopt; }
  return s.at(key).get<double>();
}

}  // namespace

QuadraticForm energy_law(int dim, double per_entry) { return QuadraticForm::energy_bound(dim * per_entry, dim); }

StateSpacePlant ExperimentConfig::plant() const { return StateSpacePlant(A, B, C, D, rank_tol); }

QuadraticForm ExperimentConfig::noise_law() const { return energy_law(T_ini * p(), epsilon); }

std::optional<QuadraticForm> ExperimentConfig::disturbance_law() const
{
  if (!disturbance_epsilon) { return std::nullopt; }
  return energy_law((T_ini + T_f) * m(), *disturbance_epsilon);
}

TrackingProblem ExperimentConfig::problem() const
{
  TrackingProblem prob;
  prob.r = r;
  prob.Q = Q;
  prob.R = R;
  prob.T_f = T_f;
  prob.noise_law = noise_law();
  prob.disturbance_law = disturbance_law();
  if (epsilon_u) { prob.input_form = energy_law(T_f * m(), *epsilon_u); }
  if (epsilon_y) { prob.output_form = energy_law(T_f * p(), *epsilon_y); }
  return prob;
}

SynthesisOptions ExperimentConfig::synthesis_options() const
{
  SynthesisOptions o;
  o.mode = mode;
  o.solver = solver;
  o.rank_tol = rank_tol;
  return o;
}

void ExperimentConfig::validate() const
{
  if (schema_version != kConfigSchemaVersion) {
    throw DimensionError(fmt::format("config: schema_version {} is not supported (expected {})", schema_version, kConfigSchemaVersion));
  }
  if (T_ini < 1 || T_f < 1 || T_d < 1) { throw DimensionError("config: T_d, T_ini and T_f must be positive"); }
  const int L = T_ini + T_f;
  if (T_d < L) { throw DimensionError(fmt::format("config: T_d = {} is shorter than T_ini + T_f = {}", T_d, L)); }
  const int cols = T_d - L + 1;
  if (cols < L * m()) {
    throw DimensionError(fmt::format("config: T_d = {} gives {} Hankel columns, fewer than the {} input rows of depth T_ini + T_f",
                                     T_d, cols, L * m()));
  }
  if (!(epsilon >= 0.0)) { throw DimensionError("config: noise epsilon must be nonnegative"); }
  if (r.size() != T_f * p()) { throw DimensionError(fmt::format("config: r has {} entries, expected T_f p = {}", r.size(), T_f * p())); }
  if (mode == Mode::Theorem3 && !disturbance_epsilon) { throw DimensionError("config: theorem3 mode needs a disturbance section"); }
  if (!(input_law.lower < input_law.upper)) { throw DimensionError("config: input law needs lower < upper"); }
  problem().validate();
  plant();
}

Json ExperimentConfig::to_json() const
{
  Json j;
  j["schema_version"] = schema_version;
  j["plant"] = Json{{"A", ddrt::to_json(A)}, {"B", ddrt::to_json(B)}, {"C", ddrt::to_json(C)}, {"D", ddrt::to_json(D)}};
  j["T_d"] = T_d;
  j["T_ini"] = T_ini;
  j["T_f"] = T_f;
  j["seed"] = seed;
  j["input_law"] = Json{{"lower", input_law.lower}, {"upper", input_law.upper}};
  j["noise"] = Json{{"epsilon", epsilon}};
  if (disturbance_epsilon) { j["disturbance"] = Json{{"epsilon", *disturbance_epsilon}}; }
  if (epsilon_u) { j["input_constraint"] = Json{{"epsilon_u", *epsilon_u}}; }
  if (epsilon_y) { j["output_constraint"] = Json{{"epsilon_y", *epsilon_y}}; }
  j["Q"] = ddrt::to_json(Q);
  j["R"] = ddrt::to_json(R);
  j["r"] = ddrt::to_json(r);
  j["mode"] = to_string(mode);
  j["solver"] = Json{{"tol", solver.feas_tol}, {"gap_tol", solver.gap_tol}, {"max_iter", solver.max_iter}, {"time_limit", solver.time_limit}};
  j["recent_start"] = recent_start == RecentStart::Fresh ? "fresh" : "continue";
  j["rank_tol"] = rank_tol;
  j["steps"] = steps;
  return j;
}

ExperimentConfig parse_config(const Json & j, const std::filesystem::path & base_dir)
{
  if (!j.is_object()) { throw DimensionError("config: top level must be an object"); }
  ExperimentConfig c;
  try {
    c.schema_version = j.value("schema_version", kConfigSchemaVersion);
    const auto & pj = j.at("plant");
    Json plant_json = pj;
    if (pj.is_string()) {
      std::filesystem::path pp = pj.get<std::string>();
      if (pp.is_relative()) { pp = base_dir / pp; }
      plant_json = read_json_file(pp);
    } else if (pj.contains("file")) {
      std::filesystem::path pp = pj.at("file").get<std::string>();
      if (pp.is_relative()) { pp = base_dir / pp; }
      plant_json = read_json_file(pp);
    }
    const StateSpacePlant plant = plant_from_json(plant_json);
    c.A = plant.A();
    c.B = plant.B();
    c.C = plant.C();
    c.D = plant.D();

    c.T_d = j.at("T_d").get<int>();
    c.T_ini = j.at("T_ini").get<int>();
    c.T_f = j.at("T_f").get<int>();
    c.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("input_law")) {
      c.input_law.lower = j.at("input_law").value("lower", -1.0);
      c.input_law.upper = j.at("input_law").value("upper", 1.0);
    }
    c.epsilon = j.at("noise").at("epsilon").get<double>();
    c.disturbance_epsilon = optional_epsilon(j, "disturbance", "epsilon");
    c.epsilon_u = optional_epsilon(j, "input_constraint", "epsilon_u");
    c.epsilon_y = optional_epsilon(j, "output_constraint", "epsilon_y");
    c.Q = square_from_json(j.value("Q", Json("identity")), c.p(), "Q");
    c.R = square_from_json(j.value("R", Json("identity")), c.m(), "R");
    const Json rj = j.value("r", Json(0.0));
    c.r = rj.is_number() ? VectorXd::Constant(c.T_f * c.p(), rj.get<double>()) : vector_from_json(rj);
    c.mode = parse_mode(j.value("mode", std::string("theorem3")));
    if (j.contains("solver")) {
      const auto & s = j.at("solver");
      c.solver.feas_tol = s.value("tol", c.solver.feas_tol);
      c.solver.gap_tol = s.value("gap_tol", c.solver.feas_tol);
      c.solver.max_iter = s.value("max_iter", c.solver.max_iter);
      c.solver.time_limit = s.value("time_limit", c.solver.time_limit);
    }
    const std::string rs = j.value("recent_start", std::string("fresh"));
    if (rs == "fresh") {
      c.recent_start = RecentStart::Fresh;
    } else if (rs == "continue") {
      c.recent_start = RecentStart::Continue;
    } else {
      throw DimensionError(fmt::format("config: recent_start '{}' must be 'fresh' or 'continue'", rs));
    }
    c.rank_tol = j.value("rank_tol", kDefaultRankTol);
    c.steps = j.value("steps", 20);
  } catch (const nlohmann::json::exception & e) {
    throw DimensionError(fmt::format("config: {}", e.what()));
  }
  c.validate();
  Fnv1a h;
  h.update(c.to_json().dump());
  c.hash = h.digest();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path & path)
{
  return parse_config(read_json_file(path), path.parent_path());
}

MatrixXd benchmark_A()
{
  MatrixXd A(4, 4);
  A << 0.6799, -0.0331, -0.8332, 0.4924,
       0.9748, 1.0060, 0.3666, 0.5863,
       0.7311, 0.3693, -1.0711, 0.1603,
       -0.7442, 0.0330, 0.0667, 0.1961;
  return A;
}

MatrixXd benchmark_B()
{
  MatrixXd B(4, 3);
  B << -0.7841, -0.1798, -0.0757,
       0.5204, -0.5806, -0.6510,
       0.1974, 0.2140, -0.4851,
       -0.9378, 0.7881, -0.1826;
  return B;
}

MatrixXd benchmark_C()
{
  MatrixXd C(2, 4);
  C << 0.4458, 0.4911, 0.7394, -0.1359,
       0.0733, -0.1468, -0.6357, 0.7353;
  return C;
}

ExperimentConfig benchmark_config()
{
  ExperimentConfig c;
  c.A = benchmark_A();
  c.B = benchmark_B();
  c.C = benchmark_C();
  c.D = MatrixXd::Zero(2, 3);
  c.T_d = 110;
  c.T_ini = 6;
  c.T_f = 20;
  c.seed = 2;
  c.epsilon = 0.001;
  c.disturbance_epsilon = 0.001;
  c.epsilon_u = 0.5;
  c.epsilon_y = 0.5;
  c.Q = MatrixXd::Identity(2, 2);
  c.R = MatrixXd::Identity(3, 3);
  c.r = VectorXd::Zero(c.T_f * 2);
  c.mode = Mode::Theorem3;
  c.recent_start = RecentStart::Fresh;
  c.validate();
  Fnv1a h;
  h.update(c.to_json().dump());
  c.hash = h.digest();
  return c;
}

ExperimentData generate_experiment_data(const ExperimentConfig & cfg)
{
  const StateSpacePlant plant = cfg.plant();
  ExperimentData out;
  out.historical = generate_historical(plant, cfg.T_d, cfg.input_law, cfg.seed);
  VectorXd x0;
  if (cfg.recent_start == RecentStart::Continue) {
    x0 = out.historical.final_state;
  } else {
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    x0.resize(plant.n());
    for (int i = 0; i < plant.n(); ++i) { x0(i) = normal(rng); }
  }
  std::optional<Perturbation> noise = Perturbation{cfg.noise_law(), {}};
  std::optional<Perturbation> dist;
  if (const auto dl = cfg.disturbance_law(); dl && cfg.mode == Mode::Theorem3) { dist = Perturbation{*dl, {}}; }
  out.recent = generate_recent(plant, x0, cfg.T_ini, cfg.input_law, noise, dist, cfg.seed + 1);
  return out;
}

}  // namespace ddrt
