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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eeesim/eee_port.hpp"
#include "eeesim/types.hpp"

namespace eeesim {

struct DelayStats {
  std::uint64_t count = 0;
  double mean_us = 0;
  double median_us = 0;
  double p99_us = 0;
  double max_us = 0;

  /// Nearest-rank quantiles over an unsorted sample set.
  static DelayStats from_samples(std::vector<Time> samples);
};

struct EpochRecord {
  Nanos epoch{0};
  std::size_t active_ports = 0;
  std::vector<double> port_load_bps;
};

struct PortReport {
  std::array<std::int64_t, kPortStateCount> residence_ps{};  // indexed by PortState
  double energy = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
};

/// Whole-run packet bookkeeping, measurement window ignored.
/// injected == delivered + dropped + in_ports always holds.
struct Conservation {
  std::uint64_t injected = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t in_ports = 0;
};

struct MetricsReport {
  std::string algorithm;
  std::size_t n_ports = 0;
  double measured_seconds = 0;

  DelayStats overall;
  DelayStats normal;
  DelayStats low_latency;

  double energy = 0;  // normalized-power seconds over the window, all ports
  double normalized_energy = 0;
  std::uint64_t drops_normal = 0;
  std::uint64_t drops_ll = 0;
  double mean_active_ports = 0;

  std::vector<EpochRecord> epochs;
  std::vector<PortReport> ports;
  Conservation totals;

  const DelayStats& delays(TrafficClass c) const {
    return c == TrafficClass::LowLatency ? low_latency : normal;
  }
};

std::string to_json(const MetricsReport& report);
MetricsReport report_from_json(std::string_view text);

/// Aligned-column summary for terminals.
std::string to_text(const MetricsReport& report);

/// `epoch_ns,active_ports,port0_bps,...` one row per control epoch.
std::string epochs_to_csv(const MetricsReport& report);

}  // namespace eeesim
