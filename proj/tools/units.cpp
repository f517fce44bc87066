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

#include "units.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <utility>

#include "eeesim/errors.hpp"

namespace eeesim::cli {

namespace {

std::pair<double, std::string_view> split_number(std::string_view text, const char* what) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr == text.data())
    throw ConfigError(std::string("bad ") + what + " '" + std::string(text) + "'");
  return {value, text.substr(static_cast<std::size_t>(ptr - text.data()))};
}

}  // namespace

double parse_rate(std::string_view text) {
  auto [value, suffix] = split_number(text, "rate");
  if (suffix.size() > 1 && (suffix.substr(1) == "bps" || suffix.substr(1) == "b/s"))
    suffix = suffix.substr(0, 1);
  double mult = 1;
  if (suffix.empty() || suffix == "bps") mult = 1;
  else if (suffix == "k" || suffix == "K") mult = 1e3;
  else if (suffix == "M") mult = 1e6;
  else if (suffix == "G") mult = 1e9;
  else throw ConfigError("bad rate suffix in '" + std::string(text) + "'");
  const double rate = value * mult;
  if (!(rate > 0) || !std::isfinite(rate)) throw ConfigError("rate must be positive");
  return rate;
}

Nanos parse_duration(std::string_view text) {
  auto [value, suffix] = split_number(text, "duration");
  double ns_per_unit = 1;
  if (suffix.empty() || suffix == "ns") ns_per_unit = 1;
  else if (suffix == "us") ns_per_unit = 1e3;
  else if (suffix == "ms") ns_per_unit = 1e6;
  else if (suffix == "s") ns_per_unit = 1e9;
  else throw ConfigError("bad duration suffix in '" + std::string(text) + "'");
  const double ns = value * ns_per_unit;
  if (!(ns >= 0) || ns > 9e18) throw ConfigError("duration out of range");
  return Nanos{std::llround(ns)};
}

}  // namespace eeesim::cli
