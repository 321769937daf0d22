#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "par/experiment.hpp"

namespace fs = std::filesystem;
using namespace par;

namespace {

const fs::path kSource{PARSIM_SOURCE_DIR};
const fs::path kEnvA = kSource / "scenarios" / "env_a.scn";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Cli {
  int status;
  std::string output;  // stdout and stderr together
};

Cli cli(const std::string& args) {
  const std::string cmd = std::string(PARSIM_CLI) + " " + args + " 2>&1";
  Cli r{0, {}};
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, "popen failed"};
  char buf[4096];
  while (auto n = fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, n);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && !line.starts_with("#")) out.push_back(line);
  return out;
}

struct TempDir {
  TempDir() {
    path = fs::temp_directory_path() /
           ("parsim_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path path;
  static inline int counter = 0;
};

}  // namespace

TEST(ExpandSeeds, Variants) {
  RunSpec spec;
  EXPECT_EQ(expand_seeds(spec, 7).size(), kDefaultReplications);
  EXPECT_EQ(expand_seeds(spec, 7).front(), 7u);
  spec.seeds = {3, 9};
  EXPECT_EQ(expand_seeds(spec, 7), (std::vector<std::uint64_t>{3, 9}));
  spec.reps = 3;
  EXPECT_EQ(expand_seeds(spec, 7), (std::vector<std::uint64_t>{3, 4, 5}));
}

TEST(RunExperiment, RowCountsAndAggregates) {
  TempDir dir;
  RunSpec spec;
  spec.scenario = kEnvA;
  spec.protocols = {Policy::Par, Policy::Flood};
  spec.reps = 5;
  spec.out_dir = dir.path;
  spec.overrides = {{"sim_time", "20"}};
  std::ostringstream log;
  const auto result = run_experiment(spec, log);
  ASSERT_EQ(result.exit_code, 0) << (result.diagnostics.empty() ? "" : result.diagnostics[0]);
  const auto rows = data_lines(slurp(dir.path / "summary.csv"));
  ASSERT_EQ(rows.size(), 1u + 10u + 2u);
  EXPECT_EQ(rows[0], summary_columns());
  int avg = 0;
  for (const auto& r : rows) avg += r.find(",AVG,") != std::string::npos;
  EXPECT_EQ(avg, 2);
  // Sorted by (protocol, seed).
  EXPECT_TRUE(rows[1].starts_with("env_a,flood,1,"));
  EXPECT_TRUE(rows[6].starts_with("env_a,par,1,"));
  EXPECT_EQ(result.runs.size(), 10u);
  EXPECT_NE(log.str().find("done par seed=5"), std::string::npos);
}

TEST(RunExperiment, RejectsEmptyProtocolList) {
  TempDir dir;
  RunSpec spec;
  spec.scenario = kEnvA;
  spec.out_dir = dir.path;
  std::ostringstream log;
  EXPECT_NE(run_experiment(spec, log).exit_code, 0);
}

TEST(Cli, ValidateBundled) {
  for (const char* name : {"env_a.scn", "env_b.scn"}) {
    const auto r = cli("validate " + (kSource / "scenarios" / name).string());
    EXPECT_EQ(r.status, 0) << r.output;
    EXPECT_NE(r.output.find("ok"), std::string::npos);
  }
}

TEST(Cli, ValidateReportsRangeErrors) {
  TempDir dir;
  fs::create_directories(dir.path);
  const auto bad = dir.path / "bad.scn";
  std::ofstream(bad) << "node_count = 1\ntx_range = -1\n";
  const auto r = cli("validate " + bad.string());
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.output.find("tx_range must be > 0"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("node_count must be >= 2"), std::string::npos) << r.output;
}

TEST(Cli, UnknownOverrideNamesKey) {
  TempDir dir;
  const auto r = cli("run --scenario " + kEnvA.string() + " --protocol par --seed 1 --out " +
                     dir.path.string() + " --set widht_ratio=0.8");
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.output.find("widht_ratio"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(dir.path / "summary.csv"));
}

TEST(Cli, MalformedOverrideValueNamesToken) {
  TempDir dir;
  const auto r = cli("run --scenario " + kEnvA.string() + " --protocol par --seed 1 --out " +
                     dir.path.string() + " --set tx_range=far");
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.output.find("far"), std::string::npos) << r.output;
}

TEST(Cli, MissingScenarioFile) {
  TempDir dir;
  const auto r = cli("run --scenario /nonexistent.scn --protocol par --out " + dir.path.string());
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.output.find("/nonexistent.scn"), std::string::npos) << r.output;
}

TEST(Cli, UnknownProtocol) {
  TempDir dir;
  const auto r = cli("run --scenario " + kEnvA.string() + " --protocol aodv --out " +
                     dir.path.string());
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.output.find("aodv"), std::string::npos);
}

TEST(Cli, OverrideEchoedInHeader) {
  TempDir dir;
  const auto r = cli("run --scenario " + kEnvA.string() + " --protocol par --seed 1 --out " +
                     dir.path.string() + " --set width_ratio=0.8 --set sim_time=10");
  ASSERT_EQ(r.status, 0) << r.output;
  const auto summary = slurp(dir.path / "summary.csv");
  EXPECT_NE(summary.find("# width_ratio = 0.8\n"), std::string::npos);
  EXPECT_NE(summary.find("# sim_time = 10\n"), std::string::npos);
  EXPECT_NE(slurp(dir.path / "flows.csv").find("# width_ratio = 0.8\n"), std::string::npos);
}

TEST(Cli, RerunIsByteIdentical) {
  TempDir a, b;
  const std::string common = "run --scenario " + kEnvA.string() +
                             " --protocol par --protocol cnb --protocol flood --reps 2 --trace "
                             "--set sim_time=15 --out ";
  ASSERT_EQ(cli(common + a.path.string()).status, 0);
  ASSERT_EQ(cli(common + b.path.string()).status, 0);
  for (const auto& entry : fs::directory_iterator(a.path)) {
    const auto name = entry.path().filename();
    EXPECT_EQ(slurp(entry.path()), slurp(b.path / name)) << name;
  }
  EXPECT_TRUE(fs::exists(a.path / "trace_cnb_2.csv"));
}

TEST(Cli, RecomputeMatchesSummaryRow) {
  TempDir dir;
  ASSERT_EQ(cli("run --scenario " + kEnvA.string() + " --protocol par --seed 3 --trace " +
                "--set sim_time=20 --out " + dir.path.string())
                .status,
            0);
  const auto r = cli("recompute " + (dir.path / "trace_par_3.csv").string());
  ASSERT_EQ(r.status, 0) << r.output;
  const auto rows = data_lines(slurp(dir.path / "summary.csv"));
  EXPECT_NE(r.output.find(rows[1]), std::string::npos) << r.output << "\n" << rows[1];
}
