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

#include "eeesim/testbed.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "eeesim/scenario.hpp"
#include "eeesim/traffic.hpp"

namespace eeesim {

namespace {

constexpr FlowId kFirstBulkFlow = 1;
constexpr FlowId kReplyOffset = 100;  // echo reply flow = probe flow + offset

SimConfig sim_config(const TestbedConfig& cfg, Algorithm algorithm) {
  SimConfig sc;
  sc.bundle.n_ports = cfg.n_ports;
  sc.bundle.capacity_bps = cfg.capacity_bps;
  sc.bundle.algorithm = algorithm;
  sc.port = cfg.port;
  sc.port.capacity_bps = cfg.capacity_bps;
  sc.sampling_period = cfg.sampling_period;
  sc.warmup = cfg.warmup;
  sc.duration = cfg.duration;
  sc.ll_dscp = DscpSet{cfg.ll_dscp};
  return sc;
}

CbrSpec probe_spec(const TestbedConfig& cfg, FlowId flow, std::uint8_t dscp, Nanos start) {
  CbrSpec c;
  c.rate_bps = cfg.probe_size * 8.0 * 1e9 / static_cast<double>(cfg.probe_interval.count());
  c.size = cfg.probe_size;
  c.dscp = dscp;
  c.flow = flow;
  c.start_offset = start;
  c.duration = cfg.duration - start;
  return c;
}

ProbeDelays summarize(const std::vector<Time>& fwd, const std::vector<Time>& rev) {
  ProbeDelays d;
  d.samples = fwd.size();
  if (fwd.empty()) return d;
  long double f = 0, r = 0;
  for (Time t : fwd) f += t.count();
  for (Time t : rev) r += t.count();
  d.forward_us = static_cast<double>(f / fwd.size() / 1e6L);
  d.reverse_us = rev.empty() ? 0.0 : static_cast<double>(r / rev.size() / 1e6L);
  d.round_trip_us = d.forward_us + d.reverse_us;
  return d;
}

}  // namespace

PacketStream testbed_forward_traffic(const TestbedConfig& cfg) {
  std::vector<PacketStream> parts;
  const std::uint32_t frame = cfg.udp_payload + cfg.header_bytes;
  const double tick_s = static_cast<double>(cfg.pacing_tick.count()) / 1e9;
  for (std::size_t i = 0; i < cfg.bulk_payload_rates_bps.size(); ++i) {
    const double payload_rate = cfg.bulk_payload_rates_bps[i];
    CbrSpec c;
    c.rate_bps = payload_rate * frame / cfg.udp_payload;
    c.size = frame;
    c.flow = kFirstBulkFlow + i;
    c.burst = static_cast<std::uint32_t>(
        std::max(1.0, std::round(payload_rate * tick_s / (cfg.udp_payload * 8.0))));
    c.start_offset = cfg.pacing_tick * static_cast<std::int64_t>(i) /
                     static_cast<std::int64_t>(cfg.bulk_payload_rates_bps.size());
    c.duration = cfg.duration - c.start_offset;
    parts.push_back(gen_cbr(c));
  }
  parts.push_back(gen_cbr(probe_spec(cfg, kNormalProbeFlow, 0, cfg.probe_start)));
  parts.push_back(gen_cbr(probe_spec(cfg, kLowLatencyProbeFlow, cfg.ll_dscp,
                                     cfg.probe_start + cfg.probe_interval / 4)));
  return merge(std::span<const PacketStream>(parts));
}

TestbedResult run_testbed(const TestbedConfig& cfg, Algorithm algorithm) {
  TestbedResult result;
  result.algorithm = algorithm;
  const SimConfig sc = sim_config(cfg, algorithm);

  Engine forward(sc);
  forward.record_outcomes(true);
  const PacketStream fwd_stream = testbed_forward_traffic(cfg);
  result.forward = forward.run(fwd_stream);

  // Every delivered probe is echoed straight back over the reverse bundle.
  std::vector<Time> fwd_delay[2];
  PacketStream replies;
  for (const auto& o : forward.outcomes()) {
    if (o.flow != kNormalProbeFlow && o.flow != kLowLatencyProbeFlow) continue;
    if (o.fate != Fate::Delivered || o.arrival < Time{cfg.warmup}) continue;
    const bool ll = o.flow == kLowLatencyProbeFlow;
    fwd_delay[ll].push_back(o.departure - o.arrival);
    const auto ns = (o.departure.count() + 999) / 1000;
    replies.push_back(Packet{Nanos{ns}, o.flow + kReplyOffset, 0, cfg.probe_size,
                             ll ? cfg.ll_dscp : std::uint8_t{0}});
  }
  std::stable_sort(replies.begin(), replies.end(),
                   [](const Packet& a, const Packet& b) { return a.arrival < b.arrival; });
  for (std::size_t i = 0; i < replies.size(); ++i) replies[i].seq = i;

  Engine reverse(sc);
  reverse.record_outcomes(true);
  reverse.run(replies);
  std::vector<Time> rev_delay[2];
  for (const auto& o : reverse.outcomes()) {
    if (o.fate != Fate::Delivered) continue;
    rev_delay[o.flow == kLowLatencyProbeFlow + kReplyOffset].push_back(o.departure - o.arrival);
  }

  result.normal_forward_delays = fwd_delay[0];
  result.normal_probe = summarize(fwd_delay[0], rev_delay[0]);
  result.ll_probe = summarize(fwd_delay[1], rev_delay[1]);
  return result;
}

std::vector<TestbedResult> run_testbed_comparison(const TestbedConfig& cfg, unsigned threads) {
  const Algorithm algs[] = {Algorithm::Conservative, Algorithm::SparePort, Algorithm::TwoQueues};
  std::vector<TestbedResult> out(std::size(algs));
  parallel_for(out.size(), threads, [&](std::size_t i) { out[i] = run_testbed(cfg, algs[i]); });
  return out;
}

std::string testbed_report_text(const std::vector<TestbedResult>& results) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << std::left << std::setw(14) << "algorithm" << std::setw(8) << "probe" << std::right
     << std::setw(9) << "samples" << std::setw(14) << "forward_us" << std::setw(14)
     << "reverse_us" << std::setw(14) << "rtt_us" << '\n';
  for (const auto& r : results) {
    for (const auto& [name, d] : {std::pair{"normal", r.normal_probe}, std::pair{"ll", r.ll_probe}}) {
      os << std::left << std::setw(14) << to_string(r.algorithm) << std::setw(8) << name
         << std::right << std::setw(9) << d.samples << std::setw(14) << d.forward_us
         << std::setw(14) << d.reverse_us << std::setw(14) << d.round_trip_us << '\n';
    }
  }
  return os.str();
}

}  // namespace eeesim
