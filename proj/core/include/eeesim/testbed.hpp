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

#include <cstdint>
#include <string>
#include <vector>

#include "eeesim/engine.hpp"
#include "eeesim/traffic.hpp"

namespace eeesim {

/// In-simulator recreation of a small controller testbed: a 4 x 1 Gb/s EEE
/// bundle carrying three paced UDP bulk flows and two ping-like probes, one
/// marked low-latency. Round trips cross the bundle once in each direction;
/// the reverse direction carries only the echo replies.
struct TestbedConfig {
  std::size_t n_ports = 4;
  std::uint64_t capacity_bps = 1'000'000'000ULL;
  EeePortConfig port;  // capacity overridden by capacity_bps

  // Bulk flows as an iperf3-style UDP sender: target payload rate, fixed
  // datagram payload, one train of datagrams per pacing tick.
  std::vector<double> bulk_payload_rates_bps = {700e6, 700e6, 600e6};
  std::uint32_t udp_payload = 1460;
  std::uint32_t header_bytes = 42;  // Ethernet + IPv4 + UDP
  Nanos pacing_tick{std::chrono::microseconds(1000)};

  std::uint32_t probe_size = 98;  // 56-byte ICMP echo payload on Ethernet
  Nanos probe_interval{std::chrono::microseconds(1'000'037)};
  Nanos probe_start{std::chrono::milliseconds(1200)};
  std::uint8_t ll_dscp = kExpeditedForwarding;

  Nanos sampling_period{std::chrono::milliseconds(500)};
  Nanos warmup{std::chrono::seconds(1)};
  Nanos duration{std::chrono::seconds(20)};
};

inline constexpr FlowId kNormalProbeFlow = 100;
inline constexpr FlowId kLowLatencyProbeFlow = 101;

struct ProbeDelays {
  std::uint64_t samples = 0;
  double forward_us = 0;
  double reverse_us = 0;
  double round_trip_us = 0;  // forward + reverse, per-probe mean
};

struct TestbedResult {
  Algorithm algorithm = Algorithm::Conservative;
  ProbeDelays normal_probe;
  ProbeDelays ll_probe;
  std::vector<Time> normal_forward_delays;  // per probe, injection order
  MetricsReport forward;
};

PacketStream testbed_forward_traffic(const TestbedConfig& cfg);

TestbedResult run_testbed(const TestbedConfig& cfg, Algorithm algorithm);

/// Conservative, SparePort and TwoQueues, in that order.
std::vector<TestbedResult> run_testbed_comparison(const TestbedConfig& cfg, unsigned threads);

std::string testbed_report_text(const std::vector<TestbedResult>& results);

}  // namespace eeesim
