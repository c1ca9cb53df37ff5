// Command-line front end: gen-data, solve, validate, rh-sim, bench-reduction.

#include "ddrt/config.hpp"
#include "ddrt/controller.hpp"
#include "ddrt/io.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace ddrt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitValidation = 3;
constexpr int kExitDiagnostics = 4;

struct CommonArgs
{
  std::string config;
  std::string out{"out"};
  std::string data;
  std::string mode;
  std::optional<std::uint64_t> seed;
  std::optional<double> solver_tol;
};

struct Inputs
{
  ExperimentConfig cfg;
  TrajectoryData hist;
  TrajectoryData recent;
};

ExperimentConfig load(const CommonArgs & a)
{
  ExperimentConfig cfg = a.config.empty() ? benchmark_config() : load_config(a.config);
  if (a.seed) { cfg.seed = *a.seed; }
  if (!a.mode.empty()) { cfg.mode = parse_mode(a.mode); }
  if (a.solver_tol) {
    cfg.solver.feas_tol = *a.solver_tol;
    cfg.solver.gap_tol = *a.solver_tol;
  }
  cfg.validate();
  return cfg;
}

Inputs load_inputs(const CommonArgs & a)
{
  Inputs in{load(a), {}, {}};
  if (!a.data.empty()) {
    in.hist = read_trajectory_csv(fs::path(a.data) / "historical.csv");
    in.recent = read_trajectory_csv(fs::path(a.data) / "recent.csv");
  } else {
    const ExperimentData d = generate_experiment_data(in.cfg);
    in.hist = d.historical.data;
    in.recent = d.recent.measured;
  }
  if (in.recent.length() != in.cfg.T_ini) {
    throw DimensionError(fmt::format("recent data has {} samples, config says T_ini = {}", in.recent.length(), in.cfg.T_ini));
  }
  return in;
}

Json provenance(const ExperimentConfig & cfg)
{
  return Json{{"config_hash", fmt::format("{:016x}", cfg.hash)}, {"library_version", kLibraryVersion}};
}

int status_exit(const RobustSolution & s)
{
  if (s.status == SdpStatus::Infeasible || s.status == SdpStatus::Unbounded) { return kExitInfeasible; }
  if (s.status != SdpStatus::Optimal || !s.verified) { return kExitError; }
  return kExitOk;
}

int cmd_gen_data(const CommonArgs & a)
{
  const ExperimentConfig cfg = load(a);
  const ExperimentData d = generate_experiment_data(cfg);
  const fs::path out(a.out);
  fs::create_directories(out);
  write_trajectory_csv(out / "historical.csv", d.historical.data);
  write_trajectory_csv(out / "recent.csv", d.recent.measured);
  write_trajectory_csv(out / "recent_clean.csv", d.recent.clean);
  Json j = provenance(cfg);
  j["w"] = to_json(d.recent.w);
  j["d_ini"] = to_json(d.recent.d_ini);
  j["d_bar"] = to_json(d.recent.d_bar);
  j["historical_initial_state"] = to_json(d.historical.initial_state);
  j["recent_final_state"] = to_json(d.recent.final_state);
  write_json_file(out / "realized.json", j);
  fmt::print("wrote {} historical and {} recent samples to {}\n", d.historical.data.length(), d.recent.measured.length(), out.string());
  return kExitOk;
}

Json diagnostics(const Synthesis & syn, const RobustSolution & sol)
{
  Json j;
  j["lmi_sizes"] = sol.lmi_sizes;
  j["n_w"] = sol.n_w;
  j["n_free"] = sol.n_free;
  j["redundant_g_w_length"] = syn.blocks.columns() - syn.rank_Up;
  j["noise_set_pinned"] = syn.noise_pinned;
  j["ranks"] = Json{{"U_p", syn.rank_Up}, {"U_p_Y_p", syn.rank_UpYp}, {"lambda", syn.rank_lambda}};
  j["pe_report"] = to_json(syn.pe);
  j["assembly_time"] = sol.assembly_time;
  j["min_eigenvalues"] = syn.verification.min_eigenvalues;
  return j;
}

int cmd_solve(const CommonArgs & a)
{
  const Inputs in = load_inputs(a);
  const SynthesisResult r = solve_robust_tracking(in.hist, in.recent.stacked_inputs(), in.recent.stacked_outputs(), in.cfg.problem(),
                                                  in.cfg.synthesis_options());
  Json j = solution_to_json(r.solution, in.cfg.mode);
  j["diagnostics"] = diagnostics(r.synthesis, r.solution);
  j["provenance"] = provenance(in.cfg);
  const fs::path out = fs::path(a.out) / "solution.json";
  write_json_file(out, j);
  std::ostringstream sdpa;
  write_sdpa(r.synthesis.assembled.sdp, sdpa);
  write_text_file(fs::path(a.out) / "problem.dat-s", sdpa.str());
  fmt::print("status {} gamma* {:.10g} lmi sizes [{}] -> {}\n", to_string(r.solution.status), r.solution.gamma_star,
             fmt::join(r.solution.lmi_sizes, ", "), out.string());
  return status_exit(r.solution);
}

int cmd_validate(const CommonArgs & a, int count, const std::string & solution_path)
{
  const Inputs in = load_inputs(a);
  const fs::path sol_path = solution_path.empty() ? fs::path(a.out) / "solution.json" : fs::path(solution_path);
  const RobustSolution sol = solution_from_json(read_json_file(sol_path));
  if (!sol.optimal()) {
    std::cerr << "error: solution status is " << to_string(sol.status) << ", nothing to validate\n";
    return sol.status == SdpStatus::NumericalFailure ? kExitError : kExitInfeasible;
  }
  const TrackingProblem prob = in.cfg.problem();
  const Synthesis syn =
    prepare_synthesis(in.hist, in.recent.stacked_inputs(), in.recent.stacked_outputs(), prob, in.cfg.synthesis_options());
  if (sol.u.size() != syn.assembled.layout.nu) {
    throw DimensionError(fmt::format("solution has {} inputs, problem expects {}", sol.u.size(), syn.assembled.layout.nu));
  }

  const auto forms = syn.free_vector_forms();
  const auto samples = sample_feasible(forms, count, in.cfg.seed + 1000);
  std::string csv = "idx,lqte,psi,theta,feasible\n";
  double max_lqte = -std::numeric_limits<double>::infinity();
  double min_psi = std::numeric_limits<double>::infinity();
  double min_theta = std::numeric_limits<double>::infinity();
  int violations = 0;
  const double gamma = sol.gamma_star;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const RealizationReport rep = evaluate_realization(sol.u, samples[i], syn, prob);
    const bool ok = rep.feasible && rep.lqte <= gamma * (1.0 + 1e-6);
    violations += ok ? 0 : 1;
    max_lqte = std::max(max_lqte, rep.lqte);
    if (rep.psi) { min_psi = std::min(min_psi, *rep.psi); }
    if (rep.theta) { min_theta = std::min(min_theta, *rep.theta); }
    csv += fmt::format("{},{},{},{},{}\n", i, format_double(rep.lqte), rep.psi ? format_double(*rep.psi) : "",
                       rep.theta ? format_double(*rep.theta) : "", ok ? 1 : 0);
  }
  const fs::path out(a.out);
  write_text_file(out / "realizations.csv", csv);

  Json s = provenance(in.cfg);
  s["mode"] = to_string(in.cfg.mode);
  s["count"] = count;
  s["gamma_star"] = gamma;
  s["violations"] = violations;
  if (!samples.empty()) {
    s["max_lqte"] = max_lqte;
    s["lqte_margin"] = gamma - max_lqte;
    if (prob.input_form) { s["min_psi"] = min_psi; }
    if (prob.output_form) { s["min_theta"] = min_theta; }
  }
  if (in.cfg.mode == Mode::Theorem1) {
    const WorstCase wc = worst_case_lqte(sol.u, syn.ops, syn.noise.constraint_forms.front(), prob);
    s["worst_case_lqte"] = wc.value;
    s["worst_case_relative_gap"] = std::abs(wc.value - gamma) / std::max(std::abs(gamma), 1e-300);
    if (std::abs(wc.value - gamma) > 1e-6 * (1.0 + gamma)) { ++violations; }
  }
  write_json_file(out / "validation_summary.json", s);
  fmt::print("{} realizations, {} violations, gamma* {:.10g}\n", samples.size(), violations, gamma);
  return violations == 0 ? kExitOk : kExitValidation;
}

int cmd_rh_sim(const CommonArgs & a, std::optional<int> steps)
{
  const ExperimentConfig cfg = load(a);
  const ExperimentData d = generate_experiment_data(cfg);
  RecedingHorizonOptions o;
  o.steps = steps.value_or(cfg.steps);
  o.T_ini = cfg.T_ini;
  o.synthesis = cfg.synthesis_options();
  o.warmup_law = cfg.input_law;
  o.seed = cfg.seed + 2000;
  const VectorXd x_start = d.recent.final_state;
  const ClosedLoopResult res = receding_horizon(cfg.plant(), d.historical.data, x_start, cfg.problem(), o);

  std::string csv = "k";
  for (int i = 1; i <= cfg.m(); ++i) { csv += fmt::format(",u_{}", i); }
  for (int i = 1; i <= cfg.p(); ++i) { csv += fmt::format(",y_{}", i); }
  csv += ",gamma_star\n";
  for (const auto & e : res.log) {
    if (e.y.size() == 0) { continue; }
    csv += std::to_string(e.k);
    for (Eigen::Index i = 0; i < e.u.size(); ++i) { csv += "," + format_double(e.u(i)); }
    for (Eigen::Index i = 0; i < e.y.size(); ++i) { csv += "," + format_double(e.y(i)); }
    csv += "," + format_double(e.gamma_star) + "\n";
  }
  const fs::path out(a.out);
  write_text_file(out / "closed_loop.csv", csv);
  Json log = Json::array();
  for (const auto & e : res.log) {
    log.push_back(Json{{"k", e.k}, {"status", to_string(e.status)}, {"gamma_star", e.gamma_star}, {"held", e.held}, {"message", e.message}});
  }
  Json j = provenance(cfg);
  j["halted"] = res.halted;
  j["steps"] = log;
  write_json_file(out / "rh_log.json", j);
  fmt::print("{} closed-loop steps{} -> {}\n", res.log.size(), res.halted ? " (halted)" : "", (out / "closed_loop.csv").string());
  return res.halted ? kExitInfeasible : kExitOk;
}

int cmd_bench_reduction(const CommonArgs & a)
{
  const Inputs in = load_inputs(a);
  TrackingProblem prob = in.cfg.problem();
  std::string csv = "basis,g_w_length,lmi_side,assembly_time,solve_time,gamma_star,status\n";
  std::vector<double> gammas;
  for (Basis b : {Basis::Redundant, Basis::Reduced}) {
    SynthesisOptions o = in.cfg.synthesis_options();
    o.mode = Mode::Theorem1;
    o.basis = b;
    const SynthesisResult r = solve_robust_tracking(in.hist, in.recent.stacked_inputs(), in.recent.stacked_outputs(), prob, o);
    gammas.push_back(r.solution.gamma_star);
    csv += fmt::format("{},{},{},{},{},{},{}\n", b == Basis::Reduced ? "reduced" : "redundant", r.solution.n_w,
                       r.solution.lmi_sizes.front(), format_double(r.solution.assembly_time), format_double(r.solution.solve_time),
                       format_double(r.solution.gamma_star), to_string(r.solution.status));
  }
  const fs::path out(a.out);
  write_text_file(out / "bench_reduction.csv", csv);
  fmt::print("{}", csv);
  fmt::print("relative gamma* difference {:.3e}\n", std::abs(gammas[0] - gammas[1]) / (1.0 + std::abs(gammas[1])));
  return kExitOk;
}

void add_common(CLI::App * sub, CommonArgs & a, bool data)
{
  sub->add_option("--config", a.config, "Experiment config (JSON); the built-in benchmark when omitted");
  sub->add_option("--out", a.out, "Output directory");
  sub->add_option("--seed", a.seed, "Override the config seed");
  sub->add_option("--mode", a.mode, "theorem1 or theorem3")->check(CLI::IsMember({"theorem1", "theorem3"}));
  sub->add_option("--solver-tol", a.solver_tol, "Solver feasibility and gap tolerance");
  if (data) { sub->add_option("--data", a.data, "Directory with historical.csv and recent.csv (generated when omitted)"); }
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Data-driven robust tracking via LMIs"};
  app.require_subcommand(1);
  CommonArgs a;
  int count = 100;
  std::string solution;
  std::optional<int> steps;

  auto * gen = app.add_subcommand("gen-data", "Generate historical and recent trajectories");
  add_common(gen, a, false);
  auto * sol = app.add_subcommand("solve", "Synthesize the robust input sequence");
  add_common(sol, a, true);
  auto * val = app.add_subcommand("validate", "Check a solution against sampled feasible realizations");
  add_common(val, a, true);
  val->add_option("--count", count, "Number of realizations")->check(CLI::NonNegativeNumber);
  val->add_option("--solution", solution, "Solution JSON (default <out>/solution.json)");
  auto * rh = app.add_subcommand("rh-sim", "Receding-horizon closed loop on the configured plant");
  add_common(rh, a, false);
  rh->add_option("--steps", steps, "Closed-loop steps")->check(CLI::NonNegativeNumber);
  auto * bench = app.add_subcommand("bench-reduction", "Redundant vs reduced noise basis");
  add_common(bench, a, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) { return cmd_gen_data(a); }
    if (sol->parsed()) { return cmd_solve(a); }
    if (val->parsed()) { return cmd_validate(a, count, solution); }
    if (rh->parsed()) { return cmd_rh_sim(a, steps); }
    if (bench->parsed()) { return cmd_bench_reduction(a); }
  } catch (const RankError & e) {
    std::cerr << "data diagnostics failed: " << e.what() << "\n";
    return kExitDiagnostics;
  } catch (const FeasibilityError & e) {
    std::cerr << "data inconsistent with the noise/disturbance laws: " << e.what() << "\n";
    return kExitDiagnostics;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
