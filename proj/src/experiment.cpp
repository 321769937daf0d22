#include "par/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "par/simulator.hpp"
#include "par/trace.hpp"

namespace par {
namespace {

struct Column {
  std::string_view name;
  double (*value)(const MetricsReport&);
};

#define PAR_COUNT(field) \
  Column { #field, [](const MetricsReport& r) { return static_cast<double>(r.field); } }

const std::vector<Column>& columns() {
  static const std::vector<Column> cols{
      PAR_COUNT(packets_sent),
      PAR_COUNT(packets_received),
      Column{"pdf", [](const MetricsReport& r) { return r.pdf; }},
      Column{"avg_delay_ms", [](const MetricsReport& r) { return r.avg_end_to_end_delay_ms; }},
      Column{"throughput_kbps", [](const MetricsReport& r) { return r.throughput_kbps; }},
      Column{"overhead", [](const MetricsReport& r) { return r.overhead; }},
      Column{"energy_j", [](const MetricsReport& r) { return r.energy_consumed; }},
      PAR_COUNT(control_tx_count),
      PAR_COUNT(pfant_tx),
      PAR_COUNT(pbant_tx),
      PAR_COUNT(rerr_tx),
      PAR_COUNT(data_tx),
      PAR_COUNT(dropped),
      PAR_COUNT(buffered_at_end),
      PAR_COUNT(in_flight_drained),
      PAR_COUNT(discoveries),
      PAR_COUNT(discovery_failures),
      PAR_COUNT(bant_orphans),
      PAR_COUNT(protocol_errors),
      PAR_COUNT(link_breaks),
      PAR_COUNT(conservation_violations),
  };
  return cols;
}

#undef PAR_COUNT

std::string flags_of(const MetricsReport& r) {
  std::string f;
  if (r.no_deliveries) f += "no_deliveries";
  if (r.overhead_degenerate) f += f.empty() ? "overhead_degenerate" : "|overhead_degenerate";
  return f;
}

std::string prefix_lines(std::string_view text) {
  std::string out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    out += "# ";
    out += text.substr(start, end - start);
    out += '\n';
    start = end + 1;
  }
  return out;
}

constexpr std::string_view kConventions =
    "# overhead = (pfant + pbant + rerr transmissions) / delivered data packets\n"
    "# delay = mean over delivered packets only\n"
    "# pdf = 100 * delivered / sent\n";

std::string trace_header(const Scenario& s) {
  // Lines starting with "# " survive as scenario comments when the header
  // is parsed back.
  std::string h = to_text(s);
  h += "# trace of a single run\n";
  return h;
}

}  // namespace

std::vector<std::uint64_t> expand_seeds(const RunSpec& spec, std::uint64_t scenario_seed) {
  if (!spec.reps) {
    if (!spec.seeds.empty()) return spec.seeds;
    std::vector<std::uint64_t> out(kDefaultReplications);
    for (std::uint32_t i = 0; i < kDefaultReplications; ++i) out[i] = scenario_seed + i;
    return out;
  }
  const std::uint64_t base = spec.seeds.empty() ? scenario_seed : spec.seeds.front();
  std::vector<std::uint64_t> out(*spec.reps);
  for (std::uint32_t i = 0; i < *spec.reps; ++i) out[i] = base + i;
  return out;
}

Scenario effective_scenario(const RunSpec& spec) {
  std::ifstream in(spec.scenario);
  if (!in) throw ScenarioError({"cannot open scenario file '" + spec.scenario.string() + "'"});
  std::stringstream buf;
  buf << in.rdbuf();
  Scenario s = parse_scenario(buf.str());
  apply_overrides(s, spec.overrides);
  auto d = validate(s);
  if (!d.empty()) throw ScenarioError(std::move(d));
  return s;
}

std::vector<std::string> validate_scenario_file(const std::filesystem::path& path) {
  try {
    (void)load_scenario(path);
  } catch (const ScenarioError& e) {
    return e.diagnostics();
  }
  return {};
}

std::string output_header(const Scenario& s, const std::vector<Policy>& protocols,
                          const std::vector<std::uint64_t>& seeds) {
  std::string config;
  std::istringstream lines(to_text(s));
  for (std::string line; std::getline(lines, line);) {
    if (line.starts_with("protocol = ") || line.starts_with("rng_seed = ")) continue;
    config += line;
    config += '\n';
  }
  std::string h = prefix_lines(config);
  h += "# protocols =";
  for (auto p : protocols) {
    h += ' ';
    h += to_string(p);
  }
  h += "\n# seeds =";
  for (auto seed : seeds) h += ' ' + std::to_string(seed);
  h += '\n';
  h += kConventions;
  return h;
}

std::string summary_columns() {
  std::string c = "scenario,protocol,seed";
  for (const auto& col : columns()) {
    c += ',';
    c += col.name;
  }
  c += ",flags";
  return c;
}

namespace {
std::string row_from_values(const std::string& scenario, std::string_view protocol,
                            std::string_view seed, const std::vector<double>& values,
                            const std::string& flags) {
  std::string row = scenario;
  row += ',';
  row += protocol;
  row += ',';
  row += seed;
  for (double v : values) {
    row += ',';
    row += format_double(v);
  }
  row += ',';
  row += flags;
  return row;
}

std::vector<double> values_of(const MetricsReport& r) {
  std::vector<double> v;
  for (const auto& col : columns()) v.push_back(col.value(r));
  return v;
}
}  // namespace

std::string summary_row(const std::string& scenario, std::string_view protocol,
                        std::string_view seed, const MetricsReport& r) {
  return row_from_values(scenario, protocol, seed, values_of(r), flags_of(r));
}

ExperimentResult run_experiment(const RunSpec& spec, std::ostream& log) {
  ExperimentResult result;
  Scenario base;
  try {
    if (spec.protocols.empty()) throw ScenarioError({"at least one --protocol is required"});
    base = effective_scenario(spec);
  } catch (const ScenarioError& e) {
    result.exit_code = 2;
    result.diagnostics = e.diagnostics();
    return result;
  }

  auto seeds = expand_seeds(spec, base.rng_seed);
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  if (seeds.empty()) {
    result.exit_code = 2;
    result.diagnostics.emplace_back("at least one seed is required");
    return result;
  }

  auto protocols = spec.protocols;
  std::sort(protocols.begin(), protocols.end(),
            [](Policy a, Policy b) { return to_string(a) < to_string(b); });
  protocols.erase(std::unique(protocols.begin(), protocols.end()), protocols.end());

  std::error_code ec;
  std::filesystem::create_directories(spec.out_dir, ec);
  if (ec) {
    result.exit_code = 3;
    result.diagnostics.push_back("cannot create output directory '" + spec.out_dir.string() +
                                 "': " + ec.message());
    return result;
  }

  for (auto p : protocols)
    for (auto seed : seeds) result.runs.push_back({p, seed, {}});

  std::mutex log_mutex;
  std::vector<std::string> failures(result.runs.size());
  auto run_one = [&](std::size_t i) {
    auto& run = result.runs[i];
    Scenario s = base;
    s.protocol.policy = run.protocol;
    s.rng_seed = run.seed;
    try {
      if (spec.trace) {
        const auto path = spec.out_dir / ("trace_" + std::string(to_string(run.protocol)) + "_" +
                                          std::to_string(run.seed) + ".csv");
        std::ofstream out(path, std::ios::binary);
        TraceWriter writer(out, trace_header(s));
        run.report = par::run(s, {&writer});
        if (!out) throw std::runtime_error("failed writing " + path.string());
      } else {
        run.report = par::run(s);
      }
    } catch (const std::exception& e) {
      failures[i] = e.what();
      return;
    }
    std::lock_guard lock(log_mutex);
    log << "done " << to_string(run.protocol) << " seed=" << run.seed
        << " pdf=" << format_double(run.report.pdf)
        << " overhead=" << format_double(run.report.overhead) << '\n';
  };

  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, result.runs.size());
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < result.runs.size(); i = next++) run_one(i);
    });
  for (auto& t : pool) t.join();

  for (const auto& f : failures)
    if (!f.empty()) result.diagnostics.push_back(f);
  if (!result.diagnostics.empty()) {
    result.exit_code = 4;
    return result;
  }

  const std::string header = output_header(base, protocols, seeds);
  const auto summary_path = spec.out_dir / "summary.csv";
  {
    std::ofstream out(summary_path, std::ios::binary);
    out << header << summary_columns() << '\n';
    for (const auto& run : result.runs)
      out << summary_row(base.name, to_string(run.protocol), std::to_string(run.seed), run.report)
          << '\n';
    for (auto p : protocols) {
      std::vector<double> mean(columns().size(), 0.0);
      std::size_t n = 0;
      for (const auto& run : result.runs) {
        if (run.protocol != p) continue;
        const auto v = values_of(run.report);
        for (std::size_t c = 0; c < v.size(); ++c) mean[c] += v[c];
        ++n;
      }
      for (auto& m : mean) m /= static_cast<double>(n);
      out << row_from_values(base.name, to_string(p), "AVG", mean, "") << '\n';
    }
  }
  result.files.push_back(summary_path);

  const auto flows_path = spec.out_dir / "flows.csv";
  {
    std::ofstream out(flows_path, std::ios::binary);
    out << header << "scenario,protocol,seed,flow,src,dst,sent,received,pdf,avg_delay_ms\n";
    for (const auto& run : result.runs)
      for (const auto& f : run.report.flows)
        out << base.name << ',' << to_string(run.protocol) << ',' << run.seed << ',' << f.flow
            << ',' << f.src.value << ',' << f.dst.value << ',' << f.sent << ',' << f.received
            << ',' << format_double(f.pdf) << ',' << format_double(f.avg_delay_ms) << '\n';
  }
  result.files.push_back(flows_path);

  if (spec.trace)
    for (const auto& run : result.runs)
      result.files.push_back(spec.out_dir / ("trace_" + std::string(to_string(run.protocol)) +
                                             "_" + std::to_string(run.seed) + ".csv"));
  return result;
}

}  // namespace par
