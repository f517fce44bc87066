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

#include "eeesim/packet.hpp"

#include <string>

#include "eeesim/errors.hpp"

namespace eeesim {

void validate_packet(const Packet& p) {
  if (p.size < kMinFrameBytes || p.size > kMaxFrameBytes) {
    throw ValidationError("frame size " + std::to_string(p.size) + " outside [" +
                          std::to_string(kMinFrameBytes) + ", " + std::to_string(kMaxFrameBytes) +
                          "]");
  }
  if (p.dscp > kMaxDscp) throw ValidationError("dscp " + std::to_string(p.dscp) + " > 63");
}

DscpSet::DscpSet(std::initializer_list<std::uint8_t> codes) {
  for (auto c : codes) insert(c);
}

void DscpSet::insert(std::uint8_t dscp) {
  if (dscp > kMaxDscp) throw ConfigError("dscp " + std::to_string(dscp) + " > 63");
  bits_.set(dscp);
}

}  // namespace eeesim
