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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "eeesim/packet.hpp"

namespace eeesim {

using PacketStream = std::vector<Packet>;

// Trace files are CSV with header `t_ns,flow,bytes,dscp`. Flow tokens that
// parse as unsigned 64-bit decimals are used verbatim; any other token is
// mapped through FNV-1a so that string keys still identify a flow.

PacketStream read_trace(const std::filesystem::path& path);
PacketStream read_trace(std::istream& in, const std::string& source_name = "<stream>");

void write_trace(const std::filesystem::path& path, std::span<const Packet> stream);
void write_trace(std::ostream& out, std::span<const Packet> stream);

FlowId flow_id_from_token(std::string_view token);

/// Divides every arrival time by `factor` (rounded to the nearest ns). A
/// factor of 2 doubles the mean rate.
PacketStream scale_trace(std::span<const Packet> stream, double factor);

struct CbrSpec {
  double rate_bps = 0;
  std::uint32_t size = 125;
  std::uint8_t dscp = 0;
  Nanos duration{0};
  Nanos start_offset{0};
  FlowId flow = 0;
  // Packets per train. Trains are emitted back to back at one timestamp and
  // spaced so the long-run rate is still rate_bps. 1 gives plain CBR.
  std::uint32_t burst = 1;
};

/// Constant-bit-rate source. The k-th train starts at
/// start_offset + round(k * burst * size * 8 / rate) ns, so rounding error
/// never accumulates.
PacketStream gen_cbr(const CbrSpec& spec);

enum class Phasing {
  Spread,   // flow i offset by i/n of the train period
  Aligned,  // every flow starts at start_offset
};

/// `flows` CBR sources sharing `total_rate_bps` equally, merged.
struct AggregateSpec {
  double total_rate_bps = 0;
  std::uint32_t flows = 1;
  std::uint32_t size = 1500;
  std::uint8_t dscp = 0;
  Nanos duration{0};
  Nanos start_offset{0};
  FlowId first_flow = 0;
  std::uint32_t burst = 1;
  Phasing phasing = Phasing::Spread;
};

PacketStream gen_aggregate(const AggregateSpec& spec);

/// Merges time-ordered streams into one ordered by (arrival, stream index,
/// seq) and renumbers seq from 0.
PacketStream merge(std::span<const std::span<const Packet>> streams);
PacketStream merge(std::span<const PacketStream> streams);

/// Throws ValidationError unless arrivals are non-decreasing and seq strictly
/// increasing.
void validate_stream(std::span<const Packet> stream, const std::string& name = "stream");

/// Mean rate in bits/s over [first arrival, last arrival]; 0 for < 2 packets.
double mean_rate_bps(std::span<const Packet> stream);

}  // namespace eeesim
