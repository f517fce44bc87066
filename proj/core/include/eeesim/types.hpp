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
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace eeesim {

/// Simulation clock. Picosecond ticks keep frame durations exact at
/// 10 Gb/s, where a 64-byte frame lasts 51.2 ns.
using Time = std::chrono::duration<std::int64_t, std::pico>;
using Nanos = std::chrono::nanoseconds;

using FlowId = std::uint64_t;
using PortIndex = std::size_t;

enum class TrafficClass : std::uint8_t { Normal = 0, LowLatency = 1 };
enum class Queue : std::uint8_t { High = 0, Low = 1 };

inline constexpr std::size_t kClassCount = 2;

constexpr std::size_t index_of(TrafficClass c) { return static_cast<std::size_t>(c); }

constexpr double to_us(Time t) { return static_cast<double>(t.count()) / 1e6; }
constexpr double to_seconds(Time t) { return static_cast<double>(t.count()) / 1e12; }

/// Serialization time of `bytes` on a link of `capacity_bps`, rounded to
/// the nearest picosecond. No preamble or inter-frame gap is added.
Time transmission_time(std::uint32_t bytes, std::uint64_t capacity_bps);

std::string_view to_string(TrafficClass c);
std::string_view to_string(Queue q);

}  // namespace eeesim
