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

#include "eeesim/eee_port.hpp"

#include <algorithm>
#include <string>

#include "eeesim/errors.hpp"

namespace eeesim {

void EeePortConfig::validate() const {
  if (capacity_bps == 0) throw ConfigError("port: capacity must be positive");
  if (t_sleep < Nanos::zero()) throw ConfigError("port: t_sleep must be >= 0");
  if (t_wake < Nanos::zero()) throw ConfigError("port: t_wake must be >= 0");
  if (buffer_limit < 1) throw ConfigError("port: buffer_limit must be >= 1");
  if (!(p_lpi >= 0) || !(p_lpi <= p_active))
    throw ConfigError("port: need 0 <= p_lpi <= p_active");
}

std::string_view to_string(PortState s) {
  switch (s) {
    case PortState::Active: return "active";
    case PortState::Lpi: return "lpi";
    case PortState::SleepTrans: return "sleep_trans";
    case PortState::WakeTrans: return "wake_trans";
  }
  return "?";
}

double PortAccounting::energy(const EeePortConfig& cfg) const {
  double e = 0;
  for (std::size_t i = 0; i < kPortStateCount; ++i) {
    const double power = static_cast<PortState>(i) == PortState::Lpi ? cfg.p_lpi : cfg.p_active;
    e += to_seconds(residence_[i]) * power;
  }
  return e;
}

EeePort::EeePort(const EeePortConfig& cfg, MeasurementWindow window)
    : cfg_(cfg), window_(window) {
  cfg_.validate();
}

void EeePort::fault(std::string_view what, Time now) const {
  throw SimulationFault("eee_port: " + std::string(what) + " (now=" + std::to_string(now.count()) +
                        "ps, clock=" + std::to_string(clock_.count()) + "ps, state=" +
                        std::string(to_string(state_)) + ", queued=" + std::to_string(occupancy()) +
                        ")");
}

void EeePort::accumulate_energy(Time from, Time to) {
  if (to < from) fault("energy interval ends before it starts", to);
  const Time lo = std::max(from, window_.begin);
  const Time hi = std::min(to, window_.end);
  if (hi > lo) accounting_.add_residence(state_, hi - lo);
}

void EeePort::advance_to(Time now) {
  if (now < clock_) fault("time went backwards", now);
  accumulate_energy(clock_, now);
  clock_ = now;
}

PortEvent EeePort::start_next(Time now) {
  auto& q = !high_.empty() ? high_ : low_;
  if (q.empty()) fault("start_next with empty queues", now);
  Entry e = q.front();
  q.pop_front();
  const Time ends = now + transmission_time(e.packet.size, cfg_.capacity_bps);
  in_flight_ = InFlight{e, now, ends};
  return PortEvent{ends, PortEventKind::TxComplete};
}

EnqueueResult EeePort::enqueue(const QueuedPacket& p, Queue q, Time now) {
  advance_to(now);
  if (occupancy() >= cfg_.buffer_limit) {
    ++counters_.dropped;
    if (window_.contains(p.arrival)) accounting_.record_drop(p.cls);
    return {};
  }
  (q == Queue::High ? high_ : low_).push_back(Entry{p, q});
  ++counters_.accepted;

  EnqueueResult r{true, std::nullopt};
  switch (state_) {
    case PortState::Lpi:
      state_ = PortState::WakeTrans;
      transition_ends_ = now + cfg_.t_wake;
      r.scheduled = PortEvent{transition_ends_, PortEventKind::WakeComplete};
      break;
    case PortState::SleepTrans:
      wake_pending_ = true;
      break;
    case PortState::WakeTrans:
      break;
    case PortState::Active:
      if (!in_flight_) r.scheduled = start_next(now);
      break;
  }
  return r;
}

TxCompletion EeePort::on_tx_complete(Time now) {
  advance_to(now);
  if (!in_flight_ || state_ != PortState::Active) fault("tx complete without a transmission", now);
  if (in_flight_->ends != now) fault("tx complete at the wrong time", now);

  const InFlight done = *in_flight_;
  in_flight_.reset();
  ++counters_.delivered;
  if (window_.contains(done.entry.packet.arrival))
    accounting_.record_delay(done.entry.packet.cls, now - done.entry.packet.arrival);

  TxCompletion c{Departure{done.entry.packet, done.entry.queue, done.start, now}, {}};
  if (occupancy() > 0) {
    c.scheduled = start_next(now);
  } else {
    state_ = PortState::SleepTrans;
    transition_ends_ = now + cfg_.t_sleep;
    c.scheduled = PortEvent{transition_ends_, PortEventKind::SleepComplete};
  }
  return c;
}

std::optional<PortEvent> EeePort::on_sleep_complete(Time now) {
  advance_to(now);
  if (state_ != PortState::SleepTrans || transition_ends_ != now)
    fault("sleep complete outside a sleep transition", now);
  if (!wake_pending_) {
    state_ = PortState::Lpi;
    return std::nullopt;
  }
  wake_pending_ = false;
  state_ = PortState::WakeTrans;
  transition_ends_ = now + cfg_.t_wake;
  return PortEvent{transition_ends_, PortEventKind::WakeComplete};
}

PortEvent EeePort::on_wake_complete(Time now) {
  advance_to(now);
  if (state_ != PortState::WakeTrans || transition_ends_ != now)
    fault("wake complete outside a wake transition", now);
  if (occupancy() == 0) fault("woke with nothing to send", now);
  state_ = PortState::Active;
  return start_next(now);
}

}  // namespace eeesim
