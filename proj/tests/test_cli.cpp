#include <ddrt/io.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

using namespace ddrt;
namespace fs = std::filesystem;

namespace {

int run(const std::string & args)
{
  const std::string cmd = std::string(DDRT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path out_dir(const std::string & name)
{
  const fs::path d = fs::temp_directory_path() / ("ddrt_cli_" + name);
  fs::remove_all(d);
  return d;
}

std::string fixture(const std::string & f) { return (fs::path(DDRT_FIXTURE_DIR) / f).string(); }

}  // namespace

TEST(Cli, GenerateSolveValidateTheoremOne)
{
  const auto d = out_dir("t1");
  const std::string cfg = "--config " + fixture("benchmark_config.json") + " --mode theorem1 --out " + d.string();
  ASSERT_EQ(run("gen-data " + cfg), 0);
  EXPECT_TRUE(fs::exists(d / "historical.csv"));
  EXPECT_TRUE(fs::exists(d / "recent.csv"));
  ASSERT_EQ(run("solve " + cfg + " --data " + d.string()), 0);
  const auto sol = read_json_file(d / "solution.json");
  EXPECT_EQ(sol.at("status"), "optimal");
  EXPECT_EQ(sol.at("diagnostics").at("n_w"), 4);
  ASSERT_EQ(run("validate " + cfg + " --data " + d.string() + " --count 20"), 0);
  const auto summary = read_json_file(d / "validation_summary.json");
  EXPECT_EQ(summary.at("violations"), 0);
  EXPECT_LT(summary.at("worst_case_relative_gap").get<double>(), 1e-6);
}

TEST(Cli, MissingDataIsAnError)
{
  const auto d = out_dir("missing");
  EXPECT_EQ(run("solve --data " + (d / "nowhere").string() + " --out " + d.string()), 1);
}

TEST(Cli, BadConfigIsAnError)
{
  const auto d = out_dir("badcfg");
  fs::create_directories(d);
  std::ofstream(d / "cfg.json") << "{\"plant\": 3}";
  EXPECT_NE(run("gen-data --config " + (d / "cfg.json").string() + " --out " + d.string()), 0);
}

TEST(Cli, UnknownSubcommandIsUsageError)
{
  EXPECT_NE(run("frobnicate"), 0);
}

TEST(Cli, RankDeficientDataExitsWithDiagnostics)
{
  const auto d = out_dir("rank");
  const std::string c = "--config " + fixture("benchmark_config.json") + " --mode theorem1 --out " + d.string();
  ASSERT_EQ(run("gen-data " + c), 0);
  // constant historical input: U_p loses row rank
  const auto hist = read_trajectory_csv(d / "historical.csv");
  write_trajectory_csv(d / "historical.csv", TrajectoryData(MatrixXd::Constant(hist.m(), hist.length(), 0.5), hist.outputs()));
  EXPECT_EQ(run("solve " + c + " --data " + d.string()), 4);
}

TEST(Cli, RecedingHorizonAndReductionBenchmark)
{
  const auto d = out_dir("rh");
  const std::string c = "--config " + fixture("benchmark_config.json") + " --mode theorem1 --out " + d.string();
  ASSERT_EQ(run("rh-sim " + c + " --steps 3"), 0);
  const auto log = read_json_file(d / "rh_log.json");
  EXPECT_FALSE(log.at("halted").get<bool>());
  EXPECT_EQ(log.at("steps").size(), 3u);
  EXPECT_TRUE(fs::exists(d / "closed_loop.csv"));
  ASSERT_EQ(run("gen-data " + c), 0);
  ASSERT_EQ(run("bench-reduction " + c + " --data " + d.string()), 0);
  std::ifstream is(d / "bench_reduction.csv");
  std::string header, redundant, reduced;
  std::getline(is, header);
  std::getline(is, redundant);
  std::getline(is, reduced);
  EXPECT_EQ(header, "basis,g_w_length,lmi_side,assembly_time,solve_time,gamma_star,status");
  EXPECT_EQ(redundant.rfind("redundant,67,128,", 0), 0u) << redundant;
  EXPECT_EQ(reduced.rfind("reduced,4,65,", 0), 0u) << reduced;
}

TEST(Cli, TightOutputBoundIsReportedInfeasible)
{
  const auto d = out_dir("tight");
  fs::create_directories(d);
  Json cfg = read_json_file(fixture("benchmark_config.json"));
  cfg["plant"] = read_json_file(fixture("benchmark_plant.json"));
  cfg["output_constraint"] = Json{{"epsilon_y", 1e-4}};
  write_json_file(d / "cfg.json", cfg);
  const std::string c = "--config " + (d / "cfg.json").string() + " --mode theorem1 --out " + d.string();
  ASSERT_EQ(run("gen-data " + c), 0);
  EXPECT_EQ(run("solve " + c + " --data " + d.string()), 2);
  EXPECT_EQ(read_json_file(d / "solution.json").at("status"), "infeasible");
  EXPECT_EQ(run("validate " + c + " --data " + d.string()), 2);
}
