// parsim: command-line front end for the petal ant routing simulator.
//
//   parsim run --scenario scenarios/env_a.scn --protocol par --protocol flood \
//              --reps 5 --out results/ --set width_ratio=0.8 --trace
//   parsim validate scenarios/env_b.scn
//   parsim recompute results/trace_par_1.csv

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "par/experiment.hpp"
#include "par/metrics.hpp"
#include "par/protocol_config.hpp"
#include "par/trace.hpp"

namespace {

int cmd_run(const std::string& scenario, const std::vector<std::string>& protocols,
            const std::vector<std::uint64_t>& seeds, int reps, const std::string& out,
            const std::vector<std::string>& sets, bool trace) {
  par::RunSpec spec;
  spec.scenario = scenario;
  spec.out_dir = out;
  spec.trace = trace;
  spec.seeds = seeds;
  if (reps > 0) spec.reps = static_cast<std::uint32_t>(reps);

  for (const auto& p : protocols) {
    auto policy = par::parse_policy(p);
    if (!policy) {
      std::cerr << "error: unknown protocol '" << p << "' (expected par, cnb or flood)\n";
      return 2;
    }
    spec.protocols.push_back(*policy);
  }
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "error: malformed --set '" << kv << "' (expected key=value)\n";
      return 2;
    }
    spec.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }

  const auto result = par::run_experiment(spec, std::cout);
  for (const auto& d : result.diagnostics) std::cerr << "error: " << d << '\n';
  if (result.exit_code == 0)
    for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
  return result.exit_code;
}

int cmd_validate(const std::string& path) {
  const auto diagnostics = par::validate_scenario_file(path);
  if (diagnostics.empty()) {
    std::cout << path << ": ok\n";
    return 0;
  }
  for (const auto& d : diagnostics) std::cerr << path << ": " << d << '\n';
  return 1;
}

int cmd_recompute(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open trace '" << path << "'\n";
    return 2;
  }
  try {
    const auto trace = par::read_trace(in);
    const auto report = par::recompute_report(trace);
    const auto scenario = par::parse_scenario(trace.header);
    std::cout << par::summary_columns() << '\n'
              << par::summary_row(scenario.name, par::to_string(scenario.protocol.policy),
                                  std::to_string(scenario.rng_seed), report)
              << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Petal ant routing MANET simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run protocols x seeds and write CSV results");
  std::string scenario;
  std::vector<std::string> protocols;
  std::vector<std::uint64_t> seeds;
  int reps = 0;
  std::string out = "results";
  std::vector<std::string> sets;
  bool trace = false;
  run->add_option("--scenario", scenario, "scenario file")->required();
  run->add_option("--protocol", protocols, "par, cnb or flood (repeatable)")->required();
  run->add_option("--seed", seeds, "seed (repeatable); base seed when --reps is given");
  run->add_option("--reps", reps, "replications from the base seed (default 15)")
      ->check(CLI::PositiveNumber);
  run->add_option("--out", out, "output directory");
  run->add_option("--set", sets, "override key=value (repeatable)");
  run->add_flag("--trace", trace, "write one event trace per run");

  auto* validate = app.add_subcommand("validate", "check a scenario file without running it");
  std::string validate_path;
  validate->add_option("scenario", validate_path, "scenario file")->required();

  auto* recompute = app.add_subcommand("recompute", "rebuild a run's metrics from its trace");
  std::string trace_path;
  recompute->add_option("trace", trace_path, "trace file")->required();

  CLI11_PARSE(app, argc, argv);

  if (*run) return cmd_run(scenario, protocols, seeds, reps, out, sets, trace);
  if (*validate) return cmd_validate(validate_path);
  return cmd_recompute(trace_path);
}
