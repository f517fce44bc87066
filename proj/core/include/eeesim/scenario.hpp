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

#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eeesim/engine.hpp"
#include "eeesim/traffic.hpp"

namespace eeesim {

struct TraceSource {
  std::filesystem::path path;
  double scale = 1.0;  // passed to scale_trace
};

using NormalSource = std::variant<TraceSource, CbrSpec, AggregateSpec>;

/// Template for the swept low-latency stream; the rate comes from the sweep.
struct LowLatencySpec {
  std::uint32_t size = 125;
  std::uint8_t dscp = kExpeditedForwarding;
  FlowId flow = 1'000'000;
  Nanos start_offset{0};
};

/// A scenario file: one SimConfig, its traffic, and the sweep to run.
/// Algorithm and LL rate are the sweep axes; every other field is fixed.
struct Scenario {
  std::string name;
  SimConfig config;
  std::vector<NormalSource> sources;
  std::optional<LowLatencySpec> low_latency;
  std::vector<Algorithm> algorithms;
  std::vector<double> ll_rates_bps;  // empty: one point, no LL traffic
  std::filesystem::path output_dir = "out";

  /// Throws ConfigError (no traffic, empty algorithm list, bad config).
  void validate() const;
};

/// Parses a JSON scenario. Each override is `json.pointer=value`, e.g.
/// `/port/buffer_limit=5000` or `duration_ns=3e9`; the value is parsed as
/// JSON when possible and as a string otherwise.
Scenario parse_scenario(std::string_view json_text, std::span<const std::string> overrides = {});
Scenario load_scenario(const std::filesystem::path& path,
                       std::span<const std::string> overrides = {});

/// Shipped synthetic-traffic scenarios: fig2, fig3, fig4, fig5, ports.
std::vector<std::string> builtin_scenario_names();
std::string builtin_scenario_json(std::string_view name);

struct SweepPoint {
  Algorithm algorithm = Algorithm::Conservative;
  double ll_rate_bps = 0;
};

struct SweepRow {
  SweepPoint point;
  double normal_rate_bps = 0;
  MetricsReport report;
};

/// Algorithm-major cartesian product of the sweep axes.
std::vector<SweepPoint> sweep_points(const Scenario& s);

PacketStream build_normal_traffic(const Scenario& s);
PacketStream build_ll_traffic(const Scenario& s, double rate_bps);

/// EEESIM_THREADS if set and positive, else hardware concurrency (min 1).
unsigned default_thread_count();

/// Runs every sweep point on a pool of `threads` workers. Row order follows
/// sweep_points(), never completion order.
std::vector<SweepRow> run_sweep(const Scenario& s, unsigned threads);

/// Runs `jobs` independent tasks on `threads` workers. Exceptions propagate
/// (the first one, after all workers stop).
void parallel_for(std::size_t jobs, unsigned threads, const std::function<void(std::size_t)>& body);

inline constexpr std::string_view kSweepCsvHeader =
    "algorithm,ll_rate_bps,normal_rate_bps,mean_delay_normal_us,mean_delay_ll_us,"
    "normalized_energy,drops_normal,drops_ll,mean_active_ports";

std::string sweep_csv(std::span<const SweepRow> rows);

/// Writes <output_dir>/<name>_<algorithm>_<ll_rate>.json per row and
/// <output_dir>/<name>.csv. Returns the CSV path.
std::filesystem::path write_sweep_outputs(const Scenario& s, std::span<const SweepRow> rows);

}  // namespace eeesim
