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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eeesim/types.hpp"

namespace eeesim {

enum class Algorithm : std::uint8_t {
  Equitable,
  Greedy,
  BoundedGreedy,
  Conservative,
  SparePort,
  TwoQueues,
};

inline constexpr std::array<Algorithm, 6> kAllAlgorithms = {
    Algorithm::Equitable,    Algorithm::Greedy,    Algorithm::BoundedGreedy,
    Algorithm::Conservative, Algorithm::SparePort, Algorithm::TwoQueues};

std::string_view to_string(Algorithm a);
/// Accepts the names produced by to_string, case-insensitively, plus
/// "two-queues"/"spare-port"/"bounded-greedy" spellings.
Algorithm algorithm_from_string(std::string_view name);

struct BundleConfig {
  std::size_t n_ports = 5;
  std::uint64_t capacity_bps = 10'000'000'000ULL;
  Algorithm algorithm = Algorithm::Conservative;
  double bound_fraction = 0.9;  // BoundedGreedy only

  void validate() const;
};

struct FlowEstimate {
  FlowId flow = 0;
  std::uint64_t bytes_last_period = 0;
  double rate_bps = 0;
  TrafficClass cls = TrafficClass::Normal;
};

struct Assignment {
  PortIndex port = 0;
  Queue queue = Queue::Low;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct AllocationPlan {
  Algorithm algorithm = Algorithm::Conservative;
  Nanos epoch{0};
  std::map<FlowId, Assignment> assignments;
  std::vector<double> port_load_bps;  // planned load per port, all flows
  // Ports a newly seen flow may be placed on (Normal flows under SparePort).
  std::vector<bool> open;
  // Port reserved for low-latency flows (SparePort only).
  std::optional<PortIndex> ll_port;

  std::size_t n_ports() const { return port_load_bps.size(); }
  /// Ports with positive planned load.
  std::size_t active_ports() const;
  /// Flow -> port only, for comparing plans with the queue field aside.
  std::map<FlowId, PortIndex> port_map() const;
};

/// One estimate per flow in `byte_counts` or `known` (flows seen before but
/// silent this period get rate 0), ordered by flow id.
std::vector<FlowEstimate> estimate_rates(const std::map<FlowId, std::uint64_t>& byte_counts,
                                         Nanos period,
                                         const std::map<FlowId, TrafficClass>& known);

/// clamp(ceil(total / capacity), 1, n_ports)
std::size_t required_ports(double total_rate_bps, double capacity_bps, std::size_t n_ports);

// Allocators. Each is a pure function of its inputs; flow order in
// `estimates` does not matter.

/// Longest-processing-time balancing over ports 0..k-1.
AllocationPlan conservative_allocate(std::span<const FlowEstimate> estimates, std::size_t k,
                                     std::size_t n_ports);
AllocationPlan equitable_allocate(std::span<const FlowEstimate> estimates, std::size_t n_ports);
AllocationPlan greedy_allocate(std::span<const FlowEstimate> estimates, double capacity_bps,
                               std::size_t n_ports);
AllocationPlan bounded_greedy_allocate(std::span<const FlowEstimate> estimates,
                                       double capacity_bps, double bound_fraction,
                                       std::size_t n_ports);
AllocationPlan spare_port_allocate(std::span<const FlowEstimate> estimates, double capacity_bps,
                                   std::size_t n_ports);
AllocationPlan two_queues_allocate(std::span<const FlowEstimate> estimates, double capacity_bps,
                                   std::size_t n_ports);

/// Runs the allocator selected by `bundle.algorithm` and stamps the epoch.
AllocationPlan allocate(const BundleConfig& bundle, std::span<const FlowEstimate> estimates,
                        Nanos epoch);

/// Plan in force before the first control epoch: no flows, port 0 open.
AllocationPlan initial_plan(const BundleConfig& bundle);

/// Places a flow the incumbent plan has not seen and records it in the plan.
/// Normal flows (and every flow outside SparePort) go to the least-loaded
/// open port, lowest index on ties; SparePort sends low-latency flows to its
/// reserved port. The queue follows the plan's algorithm.
Assignment place_new_flow(AllocationPlan& plan, FlowId flow, TrafficClass cls);

/// Queue a flow of class `cls` uses under `algorithm`.
constexpr Queue queue_for(Algorithm algorithm, TrafficClass cls) {
  return (algorithm == Algorithm::TwoQueues && cls == TrafficClass::LowLatency) ? Queue::High
                                                                                : Queue::Low;
}

/// `[{"flow":..,"port":..,"queue":"high|low"}]` plus epoch and loads.
std::string plan_to_json(const AllocationPlan& plan);

}  // namespace eeesim
