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

#include "eeesim/allocation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "json.hpp"

#include "eeesim/errors.hpp"

namespace eeesim {

namespace {

AllocationPlan empty_plan(Algorithm algorithm, std::size_t n_ports) {
  if (n_ports == 0) throw ConfigError("allocation: n_ports must be >= 1");
  AllocationPlan plan;
  plan.algorithm = algorithm;
  plan.port_load_bps.assign(n_ports, 0.0);
  plan.open.assign(n_ports, false);
  return plan;
}

// Rate descending, flow id ascending.
std::vector<const FlowEstimate*> by_rate_desc(std::span<const FlowEstimate> estimates) {
  std::vector<const FlowEstimate*> order;
  order.reserve(estimates.size());
  for (const auto& e : estimates) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const FlowEstimate* a, const FlowEstimate* b) {
    if (a->rate_bps != b->rate_bps) return a->rate_bps > b->rate_bps;
    return a->flow < b->flow;
  });
  return order;
}

PortIndex least_loaded(const std::vector<double>& load, std::size_t k) {
  PortIndex best = 0;
  for (PortIndex i = 1; i < k; ++i)
    if (load[i] < load[best]) best = i;
  return best;
}

void assign(AllocationPlan& plan, const FlowEstimate& e, PortIndex port) {
  plan.assignments[e.flow] = Assignment{port, queue_for(plan.algorithm, e.cls)};
  plan.port_load_bps[port] += e.rate_bps;
}

// Longest-processing-time: each flow, largest first, onto the least-loaded
// of ports 0..k-1.
void lpt(AllocationPlan& plan, std::span<const FlowEstimate> estimates, std::size_t k) {
  for (const FlowEstimate* e : by_rate_desc(estimates))
    assign(plan, *e, least_loaded(plan.port_load_bps, k));
}

void first_fit(AllocationPlan& plan, std::span<const FlowEstimate> estimates, double threshold) {
  const std::size_t n = plan.n_ports();
  for (const FlowEstimate* e : by_rate_desc(estimates)) {
    PortIndex target = n;
    for (PortIndex i = 0; i < n; ++i) {
      if (plan.port_load_bps[i] + e->rate_bps <= threshold) {
        target = i;
        break;
      }
    }
    if (target == n) target = least_loaded(plan.port_load_bps, n);
    assign(plan, *e, target);
  }
  for (const auto& [flow, a] : plan.assignments) plan.open[a.port] = true;
  if (plan.assignments.empty()) plan.open[0] = true;
}

std::string normalize(std::string_view name) {
  std::string s;
  for (char c : name)
    if (c != '-' && c != '_' && c != ' ') s.push_back(static_cast<char>(std::tolower(c)));
  return s;
}

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Equitable: return "Equitable";
    case Algorithm::Greedy: return "Greedy";
    case Algorithm::BoundedGreedy: return "BoundedGreedy";
    case Algorithm::Conservative: return "Conservative";
    case Algorithm::SparePort: return "SparePort";
    case Algorithm::TwoQueues: return "TwoQueues";
  }
  return "?";
}

Algorithm algorithm_from_string(std::string_view name) {
  const std::string key = normalize(name);
  for (Algorithm a : kAllAlgorithms)
    if (normalize(to_string(a)) == key) return a;
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

void BundleConfig::validate() const {
  if (n_ports < 1) throw ConfigError("bundle: n_ports must be >= 1");
  if (capacity_bps == 0) throw ConfigError("bundle: capacity must be positive");
  if (!(bound_fraction > 0) || bound_fraction > 1)
    throw ConfigError("bundle: bound_fraction must be in (0, 1]");
}

std::size_t AllocationPlan::active_ports() const {
  return static_cast<std::size_t>(
      std::count_if(port_load_bps.begin(), port_load_bps.end(), [](double l) { return l > 0; }));
}

std::map<FlowId, PortIndex> AllocationPlan::port_map() const {
  std::map<FlowId, PortIndex> m;
  for (const auto& [flow, a] : assignments) m.emplace(flow, a.port);
  return m;
}

std::vector<FlowEstimate> estimate_rates(const std::map<FlowId, std::uint64_t>& byte_counts,
                                         Nanos period,
                                         const std::map<FlowId, TrafficClass>& known) {
  if (period <= Nanos::zero()) throw ConfigError("estimate_rates: period must be positive");
  std::map<FlowId, FlowEstimate> merged;
  for (const auto& [flow, cls] : known) merged[flow] = FlowEstimate{flow, 0, 0.0, cls};
  for (const auto& [flow, bytes] : byte_counts) {
    auto& e = merged.try_emplace(flow, FlowEstimate{flow, 0, 0.0, TrafficClass::Normal}).first->second;
    e.bytes_last_period = bytes;
  }
  std::vector<FlowEstimate> out;
  out.reserve(merged.size());
  for (auto& [flow, e] : merged) {
    e.rate_bps = static_cast<double>(static_cast<long double>(e.bytes_last_period) * 8.0L * 1e9L /
                                     static_cast<long double>(period.count()));
    out.push_back(e);
  }
  return out;
}

std::size_t required_ports(double total_rate_bps, double capacity_bps, std::size_t n_ports) {
  if (!(capacity_bps > 0)) throw ConfigError("required_ports: capacity must be positive");
  const double k = std::ceil(std::max(total_rate_bps, 0.0) / capacity_bps);
  if (k <= 1) return 1;
  if (k >= static_cast<double>(n_ports)) return std::max<std::size_t>(n_ports, 1);
  return static_cast<std::size_t>(k);
}

AllocationPlan conservative_allocate(std::span<const FlowEstimate> estimates, std::size_t k,
                                     std::size_t n_ports) {
  if (k < 1 || k > n_ports) throw ConfigError("conservative_allocate: need 1 <= k <= n_ports");
  AllocationPlan plan = empty_plan(Algorithm::Conservative, n_ports);
  std::fill_n(plan.open.begin(), k, true);
  lpt(plan, estimates, k);
  return plan;
}

AllocationPlan equitable_allocate(std::span<const FlowEstimate> estimates, std::size_t n_ports) {
  AllocationPlan plan = conservative_allocate(estimates, n_ports, n_ports);
  plan.algorithm = Algorithm::Equitable;
  return plan;
}

AllocationPlan greedy_allocate(std::span<const FlowEstimate> estimates, double capacity_bps,
                               std::size_t n_ports) {
  AllocationPlan plan = empty_plan(Algorithm::Greedy, n_ports);
  first_fit(plan, estimates, capacity_bps);
  return plan;
}

AllocationPlan bounded_greedy_allocate(std::span<const FlowEstimate> estimates,
                                       double capacity_bps, double bound_fraction,
                                       std::size_t n_ports) {
  if (!(bound_fraction > 0) || bound_fraction > 1)
    throw ConfigError("bounded_greedy_allocate: bound_fraction must be in (0, 1]");
  AllocationPlan plan = empty_plan(Algorithm::BoundedGreedy, n_ports);
  first_fit(plan, estimates, bound_fraction * capacity_bps);
  return plan;
}

AllocationPlan spare_port_allocate(std::span<const FlowEstimate> estimates, double capacity_bps,
                                   std::size_t n_ports) {
  std::vector<FlowEstimate> normal;
  std::vector<FlowEstimate> low_latency;
  double normal_total = 0;
  for (const auto& e : estimates) {
    if (e.cls == TrafficClass::LowLatency) {
      low_latency.push_back(e);
    } else {
      normal.push_back(e);
      normal_total += e.rate_bps;
    }
  }

  const std::size_t k = required_ports(normal_total, capacity_bps, n_ports);
  AllocationPlan plan = conservative_allocate(normal, k, n_ports);
  plan.algorithm = Algorithm::SparePort;

  // Emptiest port after the first pass; the highest index wins ties so an
  // untouched trailing port is preferred.
  PortIndex spare = n_ports - 1;
  for (PortIndex i = n_ports; i-- > 0;)
    if (plan.port_load_bps[i] < plan.port_load_bps[spare]) spare = i;
  plan.ll_port = spare;
  for (const FlowEstimate* e : by_rate_desc(low_latency)) assign(plan, *e, spare);
  return plan;
}

AllocationPlan two_queues_allocate(std::span<const FlowEstimate> estimates, double capacity_bps,
                                   std::size_t n_ports) {
  double total = 0;
  for (const auto& e : estimates) total += e.rate_bps;
  AllocationPlan plan =
      conservative_allocate(estimates, required_ports(total, capacity_bps, n_ports), n_ports);
  plan.algorithm = Algorithm::TwoQueues;
  for (const auto& e : estimates) plan.assignments[e.flow].queue = queue_for(plan.algorithm, e.cls);
  return plan;
}

AllocationPlan allocate(const BundleConfig& bundle, std::span<const FlowEstimate> estimates,
                        Nanos epoch) {
  const auto capacity = static_cast<double>(bundle.capacity_bps);
  AllocationPlan plan;
  switch (bundle.algorithm) {
    case Algorithm::Equitable:
      plan = equitable_allocate(estimates, bundle.n_ports);
      break;
    case Algorithm::Greedy:
      plan = greedy_allocate(estimates, capacity, bundle.n_ports);
      break;
    case Algorithm::BoundedGreedy:
      plan = bounded_greedy_allocate(estimates, capacity, bundle.bound_fraction, bundle.n_ports);
      break;
    case Algorithm::Conservative: {
      double total = 0;
      for (const auto& e : estimates) total += e.rate_bps;
      plan = conservative_allocate(estimates, required_ports(total, capacity, bundle.n_ports),
                                   bundle.n_ports);
      break;
    }
    case Algorithm::SparePort:
      plan = spare_port_allocate(estimates, capacity, bundle.n_ports);
      break;
    case Algorithm::TwoQueues:
      plan = two_queues_allocate(estimates, capacity, bundle.n_ports);
      break;
  }
  plan.epoch = epoch;
  return plan;
}

AllocationPlan initial_plan(const BundleConfig& bundle) {
  AllocationPlan plan = allocate(bundle, {}, Nanos::zero());
  return plan;
}

Assignment place_new_flow(AllocationPlan& plan, FlowId flow, TrafficClass cls) {
  if (auto it = plan.assignments.find(flow); it != plan.assignments.end()) return it->second;
  const std::size_t n = plan.n_ports();
  PortIndex port = 0;
  if (plan.algorithm == Algorithm::SparePort && cls == TrafficClass::LowLatency &&
      plan.ll_port) {
    port = *plan.ll_port;
  } else {
    bool found = false;
    for (PortIndex i = 0; i < n; ++i) {
      if (!plan.open[i]) continue;
      if (!found || plan.port_load_bps[i] < plan.port_load_bps[port]) port = i;
      found = true;
    }
  }
  const Assignment a{port, queue_for(plan.algorithm, cls)};
  plan.assignments.emplace(flow, a);
  return a;
}

std::string plan_to_json(const AllocationPlan& plan) {
  nlohmann::json j;
  j["algorithm"] = std::string(to_string(plan.algorithm));
  j["epoch_ns"] = plan.epoch.count();
  j["port_load_bps"] = plan.port_load_bps;
  j["active_ports"] = plan.active_ports();
  auto& rows = j["assignments"] = nlohmann::json::array();
  for (const auto& [flow, a] : plan.assignments)
    rows.push_back({{"flow", flow}, {"port", a.port}, {"queue", std::string(to_string(a.queue))},
                    {"epoch_ns", plan.epoch.count()}});
  if (plan.ll_port) j["ll_port"] = *plan.ll_port;
  return j.dump();
}

}  // namespace eeesim
