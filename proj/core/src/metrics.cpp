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

#include "eeesim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "eeesim/errors.hpp"
#include "json.hpp"

namespace eeesim {

using nlohmann::json;

DelayStats DelayStats::from_samples(std::vector<Time> samples) {
  DelayStats s;
  if (samples.empty()) return s;
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  long double sum = 0;
  for (Time t : samples) sum += static_cast<long double>(t.count());
  auto rank = [&](double q) {
    auto r = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    return samples[std::clamp<std::size_t>(r, 1, n) - 1];
  };
  s.count = n;
  s.mean_us = static_cast<double>(sum / n / 1e6L);
  s.median_us = to_us(rank(0.5));
  s.p99_us = to_us(rank(0.99));
  s.max_us = to_us(samples.back());
  return s;
}

namespace {

json to_json_value(const DelayStats& d) {
  return {{"count", d.count}, {"mean_us", d.mean_us}, {"median_us", d.median_us},
          {"p99_us", d.p99_us}, {"max_us", d.max_us}};
}

DelayStats delay_from_json(const json& j) {
  DelayStats d;
  d.count = j.at("count").get<std::uint64_t>();
  d.mean_us = j.at("mean_us").get<double>();
  d.median_us = j.at("median_us").get<double>();
  d.p99_us = j.at("p99_us").get<double>();
  d.max_us = j.at("max_us").get<double>();
  return d;
}

}  // namespace

std::string to_json(const MetricsReport& r) {
  json j;
  j["algorithm"] = r.algorithm;
  j["n_ports"] = r.n_ports;
  j["measured_seconds"] = r.measured_seconds;
  j["delay"] = {{"overall", to_json_value(r.overall)},
                {"normal", to_json_value(r.normal)},
                {"low_latency", to_json_value(r.low_latency)}};
  j["energy"] = r.energy;
  j["normalized_energy"] = r.normalized_energy;
  j["drops"] = {{"normal", r.drops_normal}, {"low_latency", r.drops_ll}};
  j["mean_active_ports"] = r.mean_active_ports;

  auto& epochs = j["epochs"] = json::array();
  for (const auto& e : r.epochs)
    epochs.push_back({{"epoch_ns", e.epoch.count()}, {"active_ports", e.active_ports},
                      {"port_load_bps", e.port_load_bps}});

  auto& ports = j["ports"] = json::array();
  for (const auto& p : r.ports) {
    json residence;
    for (std::size_t s = 0; s < kPortStateCount; ++s)
      residence[std::string(to_string(static_cast<PortState>(s)))] = p.residence_ps[s];
    ports.push_back({{"residence_ps", residence}, {"energy", p.energy},
                     {"delivered", p.delivered}, {"dropped", p.dropped}});
  }
  j["totals"] = {{"injected", r.totals.injected}, {"delivered", r.totals.delivered},
                 {"dropped", r.totals.dropped}, {"in_ports", r.totals.in_ports}};
  return j.dump(2) + "\n";
}

MetricsReport report_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
  try {
    MetricsReport r;
    r.algorithm = j.at("algorithm").get<std::string>();
    r.n_ports = j.at("n_ports").get<std::size_t>();
    r.measured_seconds = j.at("measured_seconds").get<double>();
    r.overall = delay_from_json(j.at("delay").at("overall"));
    r.normal = delay_from_json(j.at("delay").at("normal"));
    r.low_latency = delay_from_json(j.at("delay").at("low_latency"));
    r.energy = j.at("energy").get<double>();
    r.normalized_energy = j.at("normalized_energy").get<double>();
    r.drops_normal = j.at("drops").at("normal").get<std::uint64_t>();
    r.drops_ll = j.at("drops").at("low_latency").get<std::uint64_t>();
    r.mean_active_ports = j.at("mean_active_ports").get<double>();
    for (const auto& e : j.at("epochs"))
      r.epochs.push_back(EpochRecord{Nanos{e.at("epoch_ns").get<std::int64_t>()},
                                     e.at("active_ports").get<std::size_t>(),
                                     e.at("port_load_bps").get<std::vector<double>>()});
    for (const auto& p : j.at("ports")) {
      PortReport pr;
      for (std::size_t s = 0; s < kPortStateCount; ++s)
        pr.residence_ps[s] =
            p.at("residence_ps").at(std::string(to_string(static_cast<PortState>(s)))).get<std::int64_t>();
      pr.energy = p.at("energy").get<double>();
      pr.delivered = p.at("delivered").get<std::uint64_t>();
      pr.dropped = p.at("dropped").get<std::uint64_t>();
      r.ports.push_back(pr);
    }
    const auto& t = j.at("totals");
    r.totals = Conservation{t.at("injected").get<std::uint64_t>(), t.at("delivered").get<std::uint64_t>(),
                            t.at("dropped").get<std::uint64_t>(), t.at("in_ports").get<std::uint64_t>()};
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
}

std::string to_text(const MetricsReport& r) {
  std::ostringstream os;
  os << std::fixed;
  os << "algorithm          " << r.algorithm << "  (" << r.n_ports << " ports, "
     << std::setprecision(3) << r.measured_seconds << " s measured)\n\n";
  os << std::left << std::setw(14) << "class" << std::right << std::setw(12) << "packets"
     << std::setw(12) << "mean_us" << std::setw(12) << "median_us" << std::setw(12) << "p99_us"
     << std::setw(12) << "max_us" << std::setw(10) << "drops" << '\n';
  auto row = [&](std::string_view name, const DelayStats& d, std::uint64_t drops) {
    os << std::left << std::setw(14) << name << std::right << std::setw(12) << d.count
       << std::setprecision(3) << std::setw(12) << d.mean_us << std::setw(12) << d.median_us
       << std::setw(12) << d.p99_us << std::setw(12) << d.max_us << std::setw(10) << drops << '\n';
  };
  row("normal", r.normal, r.drops_normal);
  row("low_latency", r.low_latency, r.drops_ll);
  row("overall", r.overall, r.drops_normal + r.drops_ll);
  os << '\n' << std::setprecision(6);
  os << "normalized energy  " << r.normalized_energy << '\n';
  os << "mean active ports  " << std::setprecision(3) << r.mean_active_ports << '\n';
  os << "packets            injected " << r.totals.injected << ", delivered " << r.totals.delivered
     << ", dropped " << r.totals.dropped << ", in ports " << r.totals.in_ports << '\n';
  return os.str();
}

std::string epochs_to_csv(const MetricsReport& r) {
  std::ostringstream os;
  os << "epoch_ns,active_ports";
  for (std::size_t i = 0; i < r.n_ports; ++i) os << ",port" << i << "_bps";
  os << '\n' << std::setprecision(17);
  for (const auto& e : r.epochs) {
    os << e.epoch.count() << ',' << e.active_ports;
    for (double l : e.port_load_bps) os << ',' << l;
    os << '\n';
  }
  return os.str();
}

}  // namespace eeesim
