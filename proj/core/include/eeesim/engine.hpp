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

#include <chrono>
#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "eeesim/allocation.hpp"
#include "eeesim/eee_port.hpp"
#include "eeesim/metrics.hpp"
#include "eeesim/packet.hpp"

namespace eeesim {

struct SimConfig {
  BundleConfig bundle;
  EeePortConfig port;  // port.capacity_bps must equal bundle.capacity_bps
  Nanos sampling_period{std::chrono::milliseconds(500)};
  DscpSet ll_dscp = DscpSet::expedited_forwarding();
  Nanos warmup{std::chrono::milliseconds(500)};
  Nanos duration{std::chrono::seconds(2)};

  void validate() const;
};

/// Control-plane view of the bundle: the incumbent plan and the byte counters
/// the next control epoch estimates from.
class FlowTable {
 public:
  explicit FlowTable(const BundleConfig& bundle);

  /// Looks up (or places) the packet's flow and charges its bytes to the
  /// current interval. A flow's class is fixed by its first packet.
  Assignment dispatch(const Packet& p, TrafficClass cls);

  /// Estimates rates from this interval's counters, installs the configured
  /// allocator's plan stamped `now`, and resets the counters.
  const AllocationPlan& control_epoch(Nanos period, Nanos now);

  const AllocationPlan& plan() const { return plan_; }
  std::map<FlowId, std::uint64_t> byte_counts() const;
  std::map<FlowId, TrafficClass> classes() const;

 private:
  struct FlowEntry {
    Assignment assignment;
    TrafficClass cls;
    std::uint64_t bytes;
  };

  BundleConfig bundle_;
  AllocationPlan plan_;
  std::unordered_map<FlowId, FlowEntry> flows_;
};

enum class Fate : std::uint8_t { Delivered, Dropped, InPort };

/// What happened to one injected packet; kept only when requested.
struct PacketOutcome {
  std::uint64_t seq = 0;
  FlowId flow = 0;
  TrafficClass cls = TrafficClass::Normal;
  PortIndex port = 0;
  Queue queue = Queue::Low;
  Fate fate = Fate::InPort;
  Time arrival{};
  Time departure{};  // valid when delivered
};

/// Discrete-event simulation of one bundle. Single-threaded and
/// deterministic: identical config and stream give a bit-identical report.
/// An Engine holds no references to shared state and may be handed to
/// another thread between runs.
class Engine {
 public:
  explicit Engine(SimConfig cfg);

  /// Keep a PacketOutcome for every injected packet (in injection order).
  void record_outcomes(bool on) { record_outcomes_ = on; }

  /// Packets with arrival >= duration are not injected. Events are ordered by
  /// (time, ControlEpoch < Arrival < port timers, port index).
  MetricsReport run(std::span<const Packet> stream);

  const std::vector<PacketOutcome>& outcomes() const { return outcomes_; }
  const SimConfig& config() const { return cfg_; }

 private:
  SimConfig cfg_;
  bool record_outcomes_ = false;
  std::vector<PacketOutcome> outcomes_;
};

MetricsReport run(const SimConfig& cfg, std::span<const Packet> stream);

}  // namespace eeesim
