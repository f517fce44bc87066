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

#include <bitset>
#include <cstdint>
#include <initializer_list>

#include "eeesim/types.hpp"

namespace eeesim {

inline constexpr std::uint32_t kMinFrameBytes = 64;
inline constexpr std::uint32_t kMaxFrameBytes = 9216;
inline constexpr std::uint8_t kMaxDscp = 63;
inline constexpr std::uint8_t kExpeditedForwarding = 46;

struct Packet {
  Nanos arrival{0};
  FlowId flow = 0;
  std::uint64_t seq = 0;
  std::uint32_t size = 0;  // frame bytes
  std::uint8_t dscp = 0;

  friend bool operator==(const Packet&, const Packet&) = default;
};

/// Throws ValidationError if size or dscp is out of range.
void validate_packet(const Packet& p);

/// Set of DSCP codepoints treated as low-latency.
class DscpSet {
 public:
  DscpSet() = default;
  DscpSet(std::initializer_list<std::uint8_t> codes);

  static DscpSet expedited_forwarding() { return DscpSet{kExpeditedForwarding}; }

  void insert(std::uint8_t dscp);
  bool contains(std::uint8_t dscp) const { return dscp <= kMaxDscp && bits_.test(dscp); }
  bool empty() const { return bits_.none(); }
  std::uint64_t mask() const { return bits_.to_ullong(); }

  friend bool operator==(const DscpSet&, const DscpSet&) = default;

 private:
  std::bitset<64> bits_;
};

inline TrafficClass classify(const Packet& p, const DscpSet& low_latency) {
  return low_latency.contains(p.dscp) ? TrafficClass::LowLatency : TrafficClass::Normal;
}

}  // namespace eeesim
