/*
Copyright 2026 The eeesim Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eeesim/errors.hpp"
#include "eeesim/metrics.hpp"
#include "eeesim/scenario.hpp"
#include "eeesim/testbed.hpp"
#include "eeesim/traffic.hpp"
#include "json.hpp"
#include "units.hpp"

namespace {

using namespace eeesim;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitFault = 3;

PacketStream read_input(const std::string& path) {
  if (path == "-") return read_trace(std::cin, "<stdin>");
  return read_trace(std::filesystem::path(path));
}

void write_output(const std::string& path, const PacketStream& stream) {
  if (path == "-") {
    write_trace(std::cout, stream);
    std::cout.flush();
  } else {
    write_trace(std::filesystem::path(path), stream);
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct RunArgs {
  std::string scenario;
  std::string builtin;
  std::vector<std::string> overrides;
  std::vector<std::string> traces;
  double trace_scale = 1.0;
  std::string output_dir;
  unsigned threads = 0;
  bool list = false;
};

int cmd_run(const RunArgs& a) {
  if (a.list) {
    for (const auto& n : builtin_scenario_names()) std::cout << n << '\n';
    return kExitOk;
  }
  if (a.scenario.empty() == a.builtin.empty())
    throw ConfigError("run: give exactly one of a scenario file or --builtin");

  Scenario s = a.builtin.empty() ? load_scenario(a.scenario, a.overrides)
                                 : parse_scenario(builtin_scenario_json(a.builtin), a.overrides);
  if (!a.traces.empty()) {
    s.sources.clear();
    for (const auto& t : a.traces) s.sources.emplace_back(TraceSource{t, a.trace_scale});
  }
  if (!a.output_dir.empty()) s.output_dir = a.output_dir;
  s.validate();

  const unsigned threads = a.threads ? a.threads : default_thread_count();
  const auto rows = run_sweep(s, threads);
  const auto csv = write_sweep_outputs(s, rows);
  std::cout << sweep_csv(rows);
  std::cerr << "wrote " << csv.string() << '\n';
  return kExitOk;
}

struct GenArgs {
  std::string rate = "";
  std::uint32_t size = 125;
  unsigned dscp = 0;
  std::string duration = "1s";
  std::string start = "0";
  FlowId flow = 0;
  std::uint32_t burst = 1;
  std::uint32_t flows = 1;
  std::string phasing = "spread";
  std::string output = "-";
};

int cmd_gen(const GenArgs& a) {
  if (a.dscp > kMaxDscp) throw ConfigError("gen: dscp out of range");
  PacketStream out;
  if (a.flows == 1) {
    CbrSpec c;
    c.rate_bps = cli::parse_rate(a.rate);
    c.size = a.size;
    c.dscp = static_cast<std::uint8_t>(a.dscp);
    c.duration = cli::parse_duration(a.duration);
    c.start_offset = cli::parse_duration(a.start);
    c.flow = a.flow;
    c.burst = a.burst;
    out = gen_cbr(c);
  } else {
    AggregateSpec g;
    g.total_rate_bps = cli::parse_rate(a.rate);
    g.flows = a.flows;
    g.size = a.size;
    g.dscp = static_cast<std::uint8_t>(a.dscp);
    g.duration = cli::parse_duration(a.duration);
    g.start_offset = cli::parse_duration(a.start);
    g.first_flow = a.flow;
    g.burst = a.burst;
    if (a.phasing == "spread") g.phasing = Phasing::Spread;
    else if (a.phasing == "aligned") g.phasing = Phasing::Aligned;
    else throw ConfigError("gen: phasing must be spread or aligned");
    out = gen_aggregate(g);
  }
  write_output(a.output, out);
  return kExitOk;
}

int cmd_scale(const std::string& input, double factor, const std::string& output) {
  write_output(output, scale_trace(read_input(input), factor));
  return kExitOk;
}

int cmd_merge(const std::vector<std::string>& inputs, const std::string& output) {
  std::vector<PacketStream> streams;
  streams.reserve(inputs.size());
  for (const auto& in : inputs) streams.push_back(read_input(in));
  write_output(output, merge(std::span<const PacketStream>(streams)));
  return kExitOk;
}

int cmd_mininet(const std::string& duration, unsigned threads, bool as_json) {
  TestbedConfig cfg;
  cfg.duration = cli::parse_duration(duration);
  if (cfg.duration <= cfg.probe_start)
    throw ConfigError("mininet-scenario: duration must exceed the probe start");
  const auto results = run_testbed_comparison(cfg, threads ? threads : default_thread_count());
  if (!as_json) {
    std::cout << testbed_report_text(results);
    return kExitOk;
  }
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : results) {
    auto probe = [](const ProbeDelays& d) {
      return nlohmann::json{{"samples", d.samples},
                            {"forward_us", d.forward_us},
                            {"reverse_us", d.reverse_us},
                            {"round_trip_us", d.round_trip_us}};
    };
    doc.push_back({{"algorithm", std::string(to_string(r.algorithm))},
                   {"normal_probe", probe(r.normal_probe)},
                   {"ll_probe", probe(r.ll_probe)}});
  }
  std::cout << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_report(const std::string& path, bool epochs) {
  const MetricsReport r = report_from_json(slurp(path));
  std::cout << (epochs ? epochs_to_csv(r) : to_text(r));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eeesim: energy-efficient Ethernet link-aggregate simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run a scenario sweep and write JSON/CSV reports");
  run->add_option("scenario", run_args.scenario, "Scenario JSON file");
  run->add_option("--builtin", run_args.builtin, "Built-in scenario name");
  run->add_option("--set", run_args.overrides, "Override a field: key=value or /json/pointer=value");
  run->add_option("--trace", run_args.traces, "Replace the normal sources with trace files");
  run->add_option("--trace-scale", run_args.trace_scale, "Time-scale factor for --trace files");
  run->add_option("-o,--output-dir", run_args.output_dir, "Output directory");
  run->add_option("-j,--threads", run_args.threads, "Worker threads (default EEESIM_THREADS or all cores)");
  run->add_flag("--list", run_args.list, "List built-in scenarios");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate a CBR trace");
  gen->add_option("--rate", gen_args.rate, "Rate, e.g. 100M")->required();
  gen->add_option("--size", gen_args.size, "Frame bytes");
  gen->add_option("--dscp", gen_args.dscp, "DSCP codepoint");
  gen->add_option("--duration", gen_args.duration, "Duration, e.g. 1s");
  gen->add_option("--start", gen_args.start, "Start offset");
  gen->add_option("--flow", gen_args.flow, "Flow id (first flow id with --flows)");
  gen->add_option("--burst", gen_args.burst, "Packets per train");
  gen->add_option("--flows", gen_args.flows, "Split the rate over this many flows");
  gen->add_option("--phasing", gen_args.phasing, "spread or aligned");
  gen->add_option("-o,--output", gen_args.output, "Output file, - for stdout");

  std::string scale_in, scale_out = "-";
  double factor = 1.0;
  auto* scale = app.add_subcommand("scale", "Divide inter-arrival times by a factor");
  scale->add_option("input", scale_in, "Input trace, - for stdin")->required();
  scale->add_option("--factor", factor, "Rate multiplier")->required();
  scale->add_option("-o,--output", scale_out, "Output file, - for stdout");

  std::vector<std::string> merge_in;
  std::string merge_out = "-";
  auto* mrg = app.add_subcommand("merge", "Merge traces in time order");
  mrg->add_option("inputs", merge_in, "Input traces")->required();
  mrg->add_option("-o,--output", merge_out, "Output file, - for stdout");

  std::string mn_duration = "20s";
  unsigned mn_threads = 0;
  bool mn_json = false;
  auto* mn = app.add_subcommand("mininet-scenario", "Testbed recreation: 4 x 1G bundle, probes");
  mn->add_option("--duration", mn_duration, "Simulated time");
  mn->add_option("-j,--threads", mn_threads, "Worker threads");
  mn->add_flag("--json", mn_json, "JSON output");

  std::string report_in;
  bool report_epochs = false;
  auto* report = app.add_subcommand("report", "Render a run JSON as text");
  report->add_option("input", report_in, "Report JSON")->required();
  report->add_flag("--epochs", report_epochs, "Per-epoch port loads as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*gen) return cmd_gen(gen_args);
    if (*scale) return cmd_scale(scale_in, factor, scale_out);
    if (*mrg) return cmd_merge(merge_in, merge_out);
    if (*mn) return cmd_mininet(mn_duration, mn_threads, mn_json);
    if (*report) return cmd_report(report_in, report_epochs);
  } catch (const SimulationFault& e) {
    std::cerr << "simulation fault: " << e.what() << '\n';
    return kExitFault;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const eeesim::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitConfig;
}
