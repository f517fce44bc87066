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

#include <string_view>

#include "eeesim/types.hpp"

namespace eeesim::cli {

/// "100M", "2.5G", "64k", "1e9": bits per second. Suffixes are decimal.
double parse_rate(std::string_view text);

/// "1s", "500ms", "20us", "100ns"; a bare number is nanoseconds.
Nanos parse_duration(std::string_view text);

}  // namespace eeesim::cli
