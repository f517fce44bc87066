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
#include <deque>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "eeesim/types.hpp"

namespace eeesim {

struct EeePortConfig {
  std::uint64_t capacity_bps = 10'000'000'000ULL;
  Nanos t_sleep{2280};         // Ts, Active -> LPI
  Nanos t_wake{4480};          // Tw, LPI -> Active
  std::size_t buffer_limit = 10000;  // shared by both queues, in packets
  double p_active = 1.0;       // also drawn during both transitions
  double p_lpi = 0.1;

  /// Throws ConfigError on a violated invariant.
  void validate() const;
};

enum class PortState : std::uint8_t { Active = 0, Lpi = 1, SleepTrans = 2, WakeTrans = 3 };
inline constexpr std::size_t kPortStateCount = 4;

std::string_view to_string(PortState s);

enum class PortEventKind : std::uint8_t { TxComplete = 0, SleepComplete = 1, WakeComplete = 2 };

/// The single pending timer a port asks its owner to fire.
struct PortEvent {
  Time at{};
  PortEventKind kind{};

  friend bool operator==(const PortEvent&, const PortEvent&) = default;
};

struct QueuedPacket {
  std::uint64_t seq = 0;
  FlowId flow = 0;
  Time arrival{};
  std::uint32_t size = 0;
  TrafficClass cls = TrafficClass::Normal;
};

struct Departure {
  QueuedPacket packet;
  Queue queue = Queue::Low;
  Time tx_start{};
  Time departed{};
};

struct EnqueueResult {
  bool accepted = false;
  std::optional<PortEvent> scheduled;
};

struct TxCompletion {
  Departure departure;
  PortEvent scheduled;  // next transmission or sleep transition
};

/// Half-open interval over which energy and per-packet statistics are kept.
/// Delay and drop samples are attributed by arrival time.
struct MeasurementWindow {
  Time begin{Time::zero()};
  Time end{Time::max()};

  bool contains(Time t) const { return t >= begin && t < end; }
};

class PortAccounting {
 public:
  void add_residence(PortState s, Time d) { residence_[static_cast<std::size_t>(s)] += d; }
  Time residence(PortState s) const { return residence_[static_cast<std::size_t>(s)]; }
  const std::array<Time, kPortStateCount>& residences() const { return residence_; }

  /// Sum of residence x state power, in normalized-power seconds.
  double energy(const EeePortConfig& cfg) const;

  void record_delay(TrafficClass c, Time d) { delays_[index_of(c)].push_back(d); }
  void record_drop(TrafficClass c) { ++drops_[index_of(c)]; }

  std::span<const Time> delays(TrafficClass c) const { return delays_[index_of(c)]; }
  std::uint64_t drops(TrafficClass c) const { return drops_[index_of(c)]; }

 private:
  std::array<Time, kPortStateCount> residence_{};
  std::array<std::vector<Time>, kClassCount> delays_;
  std::array<std::uint64_t, kClassCount> drops_{};
};

/// Lifetime packet counters, independent of the measurement window.
struct PortCounters {
  std::uint64_t accepted = 0;
  std::uint64_t dropped = 0;
  std::uint64_t delivered = 0;
};

/// One 802.3az port: a non-preemptive transmitter in front of two
/// strict-priority FIFOs sharing a tail-drop buffer, plus the LPI state
/// machine. The port never owns a clock; every call carries `now`, and every
/// returned PortEvent must be fired by the owner at exactly its time.
///
/// A port starts in Lpi with empty queues.
class EeePort {
 public:
  explicit EeePort(const EeePortConfig& cfg, MeasurementWindow window = {});

  EnqueueResult enqueue(const QueuedPacket& p, Queue q, Time now);
  TxCompletion on_tx_complete(Time now);
  std::optional<PortEvent> on_sleep_complete(Time now);
  PortEvent on_wake_complete(Time now);

  /// Charges [from, to) to the current state, clipped to the window.
  void accumulate_energy(Time from, Time to);
  /// Moves the port clock to `now`, accumulating energy on the way.
  void advance_to(Time now);

  PortState state() const { return state_; }
  Time clock() const { return clock_; }
  bool transmitting() const { return in_flight_.has_value(); }
  bool wake_pending() const { return wake_pending_; }
  std::size_t occupancy() const { return high_.size() + low_.size(); }
  std::size_t queued(Queue q) const { return q == Queue::High ? high_.size() : low_.size(); }
  /// Packets held by the port, including one in transmission.
  std::size_t backlog() const { return occupancy() + (in_flight_ ? 1 : 0); }

  const EeePortConfig& config() const { return cfg_; }
  const PortAccounting& accounting() const { return accounting_; }
  const PortCounters& counters() const { return counters_; }

 private:
  struct Entry {
    QueuedPacket packet;
    Queue queue;
  };

  PortEvent start_next(Time now);
  [[noreturn]] void fault(std::string_view what, Time now) const;

  EeePortConfig cfg_;
  MeasurementWindow window_;
  PortState state_ = PortState::Lpi;
  Time clock_{Time::zero()};
  Time transition_ends_{Time::zero()};
  bool wake_pending_ = false;
  std::deque<Entry> high_;
  std::deque<Entry> low_;
  struct InFlight {
    Entry entry;
    Time start;
    Time ends;
  };
  std::optional<InFlight> in_flight_;
  PortAccounting accounting_;
  PortCounters counters_;
};

}  // namespace eeesim
