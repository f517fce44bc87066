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

#include "eeesim/engine.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <string>

#include "eeesim/errors.hpp"

namespace eeesim {

void SimConfig::validate() const {
  bundle.validate();
  port.validate();
  if (port.capacity_bps != bundle.capacity_bps)
    throw ConfigError("sim: port and bundle capacities differ");
  if (sampling_period <= Nanos::zero()) throw ConfigError("sim: sampling_period must be positive");
  if (duration <= Nanos::zero()) throw ConfigError("sim: duration must be positive");
  if (warmup < Nanos::zero() || warmup >= duration)
    throw ConfigError("sim: need 0 <= warmup < duration");
}

FlowTable::FlowTable(const BundleConfig& bundle) : bundle_(bundle), plan_(initial_plan(bundle)) {}

Assignment FlowTable::dispatch(const Packet& p, TrafficClass cls) {
  auto [it, inserted] = flows_.try_emplace(p.flow);
  FlowEntry& f = it->second;
  if (inserted) {
    f.cls = cls;
    f.bytes = 0;
    f.assignment = place_new_flow(plan_, p.flow, cls);
  }
  f.bytes += p.size;
  return f.assignment;
}

const AllocationPlan& FlowTable::control_epoch(Nanos period, Nanos now) {
  const auto estimates = estimate_rates(byte_counts(), period, classes());
  plan_ = allocate(bundle_, estimates, now);
  for (auto& [flow, f] : flows_) {
    f.assignment = plan_.assignments.at(flow);
    f.bytes = 0;
  }
  return plan_;
}

std::map<FlowId, std::uint64_t> FlowTable::byte_counts() const {
  std::map<FlowId, std::uint64_t> m;
  for (const auto& [flow, f] : flows_) m.emplace(flow, f.bytes);
  return m;
}

std::map<FlowId, TrafficClass> FlowTable::classes() const {
  std::map<FlowId, TrafficClass> m;
  for (const auto& [flow, f] : flows_) m.emplace(flow, f.cls);
  return m;
}

Engine::Engine(SimConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

namespace {

struct Timer {
  Time at;
  PortIndex port;
  PortEventKind kind;

  bool operator>(const Timer& o) const { return at != o.at ? at > o.at : port > o.port; }
};

class ActivePortIntegral {
 public:
  ActivePortIntegral(Time begin, Time end) : begin_(begin), end_(end) {}

  void change(Time now, std::size_t active) {
    close(now);
    active_ = active;
  }
  void close(Time now) {
    const Time lo = std::max(since_, begin_);
    const Time hi = std::min(now, end_);
    if (hi > lo) weighted_ += static_cast<long double>((hi - lo).count()) * active_;
    since_ = now;
  }
  double mean() const {
    const auto span = (end_ - begin_).count();
    return span > 0 ? static_cast<double>(weighted_ / span) : 0.0;
  }

 private:
  Time begin_, end_;
  Time since_{Time::zero()};
  std::size_t active_ = 0;
  long double weighted_ = 0;
};

std::string describe(std::string_view kind, Time at, std::size_t which) {
  return std::string(kind) + " #" + std::to_string(which) + " at " + std::to_string(at.count()) + "ps";
}

}  // namespace

MetricsReport Engine::run(std::span<const Packet> stream) {
  for (std::size_t i = 1; i < stream.size(); ++i)
    if (stream[i].arrival < stream[i - 1].arrival)
      throw ValidationError("engine: stream not time-ordered at index " + std::to_string(i));

  const Time end{cfg_.duration};
  const Time period{cfg_.sampling_period};
  const MeasurementWindow window{Time{cfg_.warmup}, end};
  const std::size_t n_ports = cfg_.bundle.n_ports;

  std::vector<EeePort> ports(n_ports, EeePort(cfg_.port, window));
  FlowTable table(cfg_.bundle);
  std::priority_queue<Timer, std::vector<Timer>, std::greater<>> timers;
  ActivePortIntegral active(window.begin, window.end);
  active.change(Time::zero(), table.plan().active_ports());

  MetricsReport report;
  report.algorithm = std::string(to_string(cfg_.bundle.algorithm));
  report.n_ports = n_ports;

  outcomes_.clear();
  if (record_outcomes_) outcomes_.reserve(stream.size());

  Time next_epoch = period;
  std::size_t next_packet = 0;
  std::uint64_t injected = 0;

  auto push = [&](PortIndex port, const PortEvent& e) { timers.push(Timer{e.at, port, e.kind}); };

  while (true) {
    const Time t_epoch = next_epoch;
    const Time t_arrival = next_packet < stream.size() ? Time{stream[next_packet].arrival} : Time::max();
    const Time t_timer = timers.empty() ? Time::max() : timers.top().at;
    const Time now = std::min({t_epoch, t_arrival, t_timer});
    if (now >= end) break;

    if (t_epoch == now) {
      const AllocationPlan& plan = table.control_epoch(cfg_.sampling_period, Nanos{now.count() / 1000});
      active.change(now, plan.active_ports());
      report.epochs.push_back(EpochRecord{plan.epoch, plan.active_ports(), plan.port_load_bps});
      next_epoch += period;
    } else if (t_arrival == now) {
      const Packet& p = stream[next_packet++];
      const TrafficClass cls = classify(p, cfg_.ll_dscp);
      const Assignment a = table.dispatch(p, cls);
      const QueuedPacket qp{injected, p.flow, now, p.size, cls};
      EnqueueResult r;
      try {
        r = ports[a.port].enqueue(qp, a.queue, now);
      } catch (const SimulationFault& f) {
        throw SimulationFault(std::string(f.what()) + " while handling " +
                              describe("arrival", now, injected) + " on port " +
                              std::to_string(a.port));
      }
      if (r.scheduled) push(a.port, *r.scheduled);
      if (record_outcomes_) {
        outcomes_.push_back(PacketOutcome{p.seq, p.flow, cls, a.port, a.queue,
                                          r.accepted ? Fate::InPort : Fate::Dropped, now, Time{}});
      }
      ++injected;
    } else {
      const Timer timer = timers.top();
      timers.pop();
      EeePort& port = ports[timer.port];
      try {
        switch (timer.kind) {
          case PortEventKind::TxComplete: {
            const TxCompletion c = port.on_tx_complete(now);
            if (record_outcomes_) {
              auto& o = outcomes_[c.departure.packet.seq];
              o.fate = Fate::Delivered;
              o.departure = c.departure.departed;
            }
            push(timer.port, c.scheduled);
            break;
          }
          case PortEventKind::SleepComplete:
            if (auto e = port.on_sleep_complete(now)) push(timer.port, *e);
            break;
          case PortEventKind::WakeComplete:
            push(timer.port, port.on_wake_complete(now));
            break;
        }
      } catch (const SimulationFault& f) {
        throw SimulationFault(std::string(f.what()) + " while handling " +
                              describe("port timer", now, timer.port));
      }
    }
  }

  for (auto& port : ports) port.advance_to(end);
  active.close(end);

  report.measured_seconds = to_seconds(window.end - window.begin);
  report.mean_active_ports = active.mean();

  std::vector<Time> all;
  std::array<std::vector<Time>, kClassCount> per_class;
  for (const auto& port : ports) {
    const auto& acc = port.accounting();
    PortReport pr;
    for (std::size_t s = 0; s < kPortStateCount; ++s)
      pr.residence_ps[s] = acc.residence(static_cast<PortState>(s)).count();
    pr.energy = acc.energy(cfg_.port);
    pr.delivered = port.counters().delivered;
    pr.dropped = port.counters().dropped;
    report.energy += pr.energy;
    report.ports.push_back(pr);

    for (TrafficClass c : {TrafficClass::Normal, TrafficClass::LowLatency}) {
      auto d = acc.delays(c);
      per_class[index_of(c)].insert(per_class[index_of(c)].end(), d.begin(), d.end());
    }
    report.drops_normal += acc.drops(TrafficClass::Normal);
    report.drops_ll += acc.drops(TrafficClass::LowLatency);

    report.totals.delivered += port.counters().delivered;
    report.totals.dropped += port.counters().dropped;
    report.totals.in_ports += port.backlog();
  }
  report.totals.injected = injected;

  const double full_power = static_cast<double>(n_ports) * cfg_.port.p_active * report.measured_seconds;
  report.normalized_energy = full_power > 0 ? report.energy / full_power : 0.0;

  all.reserve(per_class[0].size() + per_class[1].size());
  all.insert(all.end(), per_class[0].begin(), per_class[0].end());
  all.insert(all.end(), per_class[1].begin(), per_class[1].end());
  report.normal = DelayStats::from_samples(std::move(per_class[index_of(TrafficClass::Normal)]));
  report.low_latency = DelayStats::from_samples(std::move(per_class[index_of(TrafficClass::LowLatency)]));
  report.overall = DelayStats::from_samples(std::move(all));
  return report;
}

MetricsReport run(const SimConfig& cfg, std::span<const Packet> stream) {
  Engine engine(cfg);
  return engine.run(stream);
}

}  // namespace eeesim
