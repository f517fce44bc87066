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

#include "oracle.hpp"

#include <deque>
#include <map>
#include <optional>

#include "eeesim/allocation.hpp"

namespace eeesim::testing {

namespace {

struct Job {
  std::size_t index;  // injection order
  Time arrival;
  std::uint32_t size;
};

struct PortModel {
  enum Mode { Transmitting, Idle, Sleeping, Waking, Asleep };

  Mode mode = Asleep;
  Time mode_ends{};  // Sleeping / Waking / Transmitting
  bool wake_requested = false;
  std::deque<Job> high, low;
  std::optional<Job> sending;
};

struct Model {
  const SimConfig& cfg;
  std::vector<PortModel> ports;
  std::vector<OracleOutcome>& out;

  Time tx_time(const Job& j) const { return transmission_time(j.size, cfg.port.capacity_bps); }

  void begin_send(PortModel& p, Time at) {
    auto& q = p.high.empty() ? p.low : p.high;
    p.sending = q.front();
    q.pop_front();
    p.mode = PortModel::Transmitting;
    p.mode_ends = at + tx_time(*p.sending);
  }

  // Applies every internal transition strictly before `t`.
  void catch_up(PortModel& p, Time t) {
    while ((p.mode == PortModel::Transmitting || p.mode == PortModel::Sleeping ||
            p.mode == PortModel::Waking) &&
           p.mode_ends < t) {
      const Time at = p.mode_ends;
      switch (p.mode) {
        case PortModel::Transmitting:
          out[p.sending->index].fate = Fate::Delivered;
          out[p.sending->index].departure = at;
          p.sending.reset();
          if (!p.high.empty() || !p.low.empty()) {
            begin_send(p, at);
          } else {
            p.mode = PortModel::Sleeping;
            p.mode_ends = at + Time{cfg.port.t_sleep};
          }
          break;
        case PortModel::Sleeping:
          if (p.wake_requested) {
            p.wake_requested = false;
            p.mode = PortModel::Waking;
            p.mode_ends = at + Time{cfg.port.t_wake};
          } else {
            p.mode = PortModel::Asleep;
          }
          break;
        case PortModel::Waking:
          begin_send(p, at);
          break;
        default:
          break;
      }
    }
  }

  void arrive(PortIndex port, Queue q, const Job& j) {
    PortModel& p = ports[port];
    catch_up(p, j.arrival);
    out[j.index].port = port;
    if (p.high.size() + p.low.size() >= cfg.port.buffer_limit) {
      out[j.index].fate = Fate::Dropped;
      return;
    }
    (q == Queue::High ? p.high : p.low).push_back(j);
    switch (p.mode) {
      case PortModel::Asleep:
        p.mode = PortModel::Waking;
        p.mode_ends = j.arrival + Time{cfg.port.t_wake};
        break;
      case PortModel::Sleeping:
        p.wake_requested = true;
        break;
      case PortModel::Idle:
        begin_send(p, j.arrival);
        break;
      default:
        break;
    }
  }
};

}  // namespace

std::vector<OracleOutcome> oracle_simulate(const SimConfig& cfg, std::span<const Packet> stream) {
  std::vector<OracleOutcome> out;
  Model m{cfg, std::vector<PortModel>(cfg.bundle.n_ports), out};

  AllocationPlan plan = initial_plan(cfg.bundle);
  std::map<FlowId, std::uint64_t> bytes;
  std::map<FlowId, TrafficClass> classes;
  std::map<FlowId, Assignment> placed;

  const Nanos end = cfg.duration;
  Nanos next_epoch = cfg.sampling_period;
  for (const Packet& pkt : stream) {
    if (pkt.arrival >= end) break;
    while (next_epoch <= pkt.arrival) {
      plan = allocate(cfg.bundle, estimate_rates(bytes, cfg.sampling_period, classes), next_epoch);
      for (auto& [flow, b] : bytes) b = 0;
      for (auto& [flow, a] : placed) a = plan.assignments.at(flow);
      next_epoch += cfg.sampling_period;
    }
    const TrafficClass cls = classify(pkt, cfg.ll_dscp);
    auto it = placed.find(pkt.flow);
    if (it == placed.end()) {
      classes[pkt.flow] = cls;
      it = placed.emplace(pkt.flow, place_new_flow(plan, pkt.flow, cls)).first;
    }
    bytes[pkt.flow] += pkt.size;

    out.push_back(OracleOutcome{});
    m.arrive(it->second.port, it->second.queue, Job{out.size() - 1, Time{pkt.arrival}, pkt.size});
  }
  for (auto& p : m.ports) m.catch_up(p, Time{end});
  return out;
}

}  // namespace eeesim::testing
