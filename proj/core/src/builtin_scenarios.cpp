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

#include <map>
#include <string>

#include "eeesim/errors.hpp"
#include "eeesim/scenario.hpp"

namespace eeesim {

namespace {

// Synthetic stand-ins for the published experiments. Bursty normal traffic is
// a set of phase-aligned 100 Mb/s CBR flows of 1500 B frames; the first plan
// is built from no data, so two sampling periods are discarded as warmup.
const std::map<std::string, std::string, std::less<>>& builtins() {
  static const std::map<std::string, std::string, std::less<>> table = {
      {"fig2", R"({
  "name": "fig2",
  "warmup_ns": 1000000000,
  "duration_ns": 1500000000,
  "sources": [{"type": "aggregate", "total_rate_bps": 13e9, "flows": 130,
               "size": 1500, "phasing": "aligned"}],
  "sweep": {"algorithms": ["Equitable", "Greedy", "BoundedGreedy",
                           "Conservative", "SparePort", "TwoQueues"]}
})"},
      {"fig3", R"({
  "name": "fig3",
  "warmup_ns": 1000000000,
  "duration_ns": 1500000000,
  "sources": [{"type": "aggregate", "total_rate_bps": 32.5e9, "flows": 325,
               "size": 1500, "phasing": "aligned"}],
  "low_latency": {"size": 125, "dscp": 46},
  "sweep": {"algorithms": ["Conservative", "SparePort", "TwoQueues"],
            "ll_rates_bps": [1e6, 1e7, 1e8, 1e9]}
})"},
      {"fig4", R"({
  "name": "fig4",
  "warmup_ns": 1000000000,
  "duration_ns": 1500000000,
  "sources": [{"type": "aggregate", "total_rate_bps": 32.5e9, "flows": 325,
               "size": 1500, "phasing": "aligned"}],
  "low_latency": {"size": 125, "dscp": 46},
  "sweep": {"algorithms": ["Conservative", "SparePort", "TwoQueues"],
            "ll_rates_bps": [1e6, 1e7, 1e8, 1e9]}
})"},
      {"fig5", R"({
  "name": "fig5",
  "warmup_ns": 1000000000,
  "duration_ns": 1500000000,
  "sources": [{"type": "aggregate", "total_rate_bps": 32.5e9, "flows": 325,
               "size": 1500, "phasing": "aligned"}],
  "low_latency": {"size": 125, "dscp": 46},
  "sweep": {"algorithms": ["Conservative", "SparePort", "TwoQueues"],
            "ll_rates_bps": [1e6, 1e7, 1e8, 1e9]}
})"},
      {"ports", R"({
  "name": "ports",
  "warmup_ns": 1000000000,
  "duration_ns": 2000000000,
  "sources": [{"type": "aggregate", "total_rate_bps": 26e9, "flows": 260,
               "size": 1500, "phasing": "spread"}],
  "algorithm": "Conservative"
})"},
  };
  return table;
}

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : builtins()) names.push_back(name);
  return names;
}

std::string builtin_scenario_json(std::string_view name) {
  const auto& table = builtins();
  if (auto it = table.find(name); it != table.end()) return it->second;
  throw ConfigError("no built-in scenario named '" + std::string(name) + "'");
}

}  // namespace eeesim
