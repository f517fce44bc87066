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

#include "eeesim/types.hpp"

#include "eeesim/errors.hpp"

namespace eeesim {

Time transmission_time(std::uint32_t bytes, std::uint64_t capacity_bps) {
  if (capacity_bps == 0) throw ConfigError("transmission_time: capacity must be positive");
  const unsigned __int128 bits_ps = static_cast<unsigned __int128>(bytes) * 8u * 1'000'000'000'000ULL;
  return Time{static_cast<std::int64_t>((bits_ps + capacity_bps / 2) / capacity_bps)};
}

std::string_view to_string(TrafficClass c) {
  return c == TrafficClass::LowLatency ? "low_latency" : "normal";
}

std::string_view to_string(Queue q) { return q == Queue::High ? "high" : "low"; }

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace eeesim
