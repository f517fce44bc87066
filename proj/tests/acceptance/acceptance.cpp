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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eeesim/engine.hpp"
#include "eeesim/scenario.hpp"
#include "eeesim/testbed.hpp"
#include "eeesim/traffic.hpp"
#include "support/makespan.hpp"
#include "support/oracle.hpp"

using namespace eeesim;
using namespace std::chrono_literals;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
};

unsigned threads() { return default_thread_count(); }

Scenario builtin(const std::string& name, std::vector<std::string> overrides = {}) {
  return parse_scenario(builtin_scenario_json(name), overrides);
}

const SweepRow& row(const std::vector<SweepRow>& rows, Algorithm a, double ll) {
  for (const auto& r : rows)
    if (r.point.algorithm == a && r.point.ll_rate_bps == ll) return r;
  throw std::logic_error("missing sweep row");
}

std::string mbps(double bps) {
  std::ostringstream os;
  os << bps / 1e6 << "M";
  return os.str();
}

// Shared across criteria 3, 5 and 6.
const std::vector<SweepRow>& fig3_rows() {
  static const auto rows = run_sweep(builtin("fig3"), threads());
  return rows;
}

const std::vector<SweepRow>& fig2_rows() {
  static const auto rows = run_sweep(builtin("fig2"), threads());
  return rows;
}

std::vector<SweepRow> ports_rows(double rate) {
  const auto flows = static_cast<long>(std::llround(rate / 100e6));
  return run_sweep(builtin("ports", {"/sources/0/total_rate_bps=" + std::to_string(rate),
                                     "/sources/0/flows=" + std::to_string(flows),
                                     "/sweep/algorithms=[\"Conservative\",\"TwoQueues\"]"}),
                   threads());
}

const std::vector<TestbedResult>& testbed() {
  static const auto r = run_testbed_comparison(TestbedConfig{}, threads());
  return r;
}

void c1(Verdict& v) {
  SimConfig cfg;
  cfg.warmup = 0ns;
  cfg.duration = 1ms;
  Engine e(cfg);
  e.record_outcomes(true);
  e.run(PacketStream{Packet{0ns, 1, 0, 1500, 0}});
  const Time got = e.outcomes().at(0).departure - e.outcomes().at(0).arrival;
  const Time want = Time{4'480'000} + transmission_time(1500, cfg.port.capacity_bps);
  v.pass = got == want && want == Time{5'680'000};
  v.detail << "delay " << got.count() << " ps, want " << want.count() << " ps";
}

void c2(Verdict& v) {
  const std::pair<double, double> cases[] = {
      {6.5e9, 1}, {13e9, 2}, {19.5e9, 2}, {26e9, 3}, {32.5e9, 4}};
  for (auto [rate, want] : cases) {
    const double got = ports_rows(rate)[0].report.mean_active_ports;
    v.pass = v.pass && got == want;
    v.detail << rate / 1e9 << "G->" << got << " ";
  }
}

void c3(Verdict& v) {
  std::size_t compared = 0;
  auto check = [&](const MetricsReport& c, const MetricsReport& t, const std::string& where) {
    ++compared;
    if (c.energy != t.energy) {
      v.pass = false;
      v.detail << where << " differs (" << c.energy << " vs " << t.energy << ") ";
    }
  };
  for (double ll : {1e6, 1e7, 1e8, 1e9})
    check(row(fig3_rows(), Algorithm::Conservative, ll).report,
          row(fig3_rows(), Algorithm::TwoQueues, ll).report, "fig3@" + mbps(ll));
  check(row(fig2_rows(), Algorithm::Conservative, 0).report,
        row(fig2_rows(), Algorithm::TwoQueues, 0).report, "fig2");
  for (double rate : {6.5e9, 19.5e9, 32.5e9}) {
    const auto rows = ports_rows(rate);
    check(rows[0].report, rows[1].report, "ports@" + std::to_string(rate));
  }
  check(testbed()[0].forward, testbed()[2].forward, "testbed");
  v.detail << compared << " scenario pairs compared";
}

void c4(Verdict& v) {
  const Scenario s = builtin("fig3");
  const PacketStream normal = build_normal_traffic(s);

  SimConfig base = s.config;
  base.bundle.algorithm = Algorithm::Conservative;
  Engine reference(base);
  reference.record_outcomes(true);
  const auto ref_report = reference.run(normal);
  std::vector<Time> ref_delay;
  for (const auto& o : reference.outcomes())
    if (o.fate == Fate::Delivered) ref_delay.push_back(o.departure - o.arrival);

  for (double ll_rate : s.ll_rates_bps) {
    const PacketStream ll = build_ll_traffic(s, ll_rate);
    const std::span<const Packet> parts[] = {normal, ll};
    const PacketStream merged = merge(std::span<const std::span<const Packet>>(parts));
    SimConfig cfg = s.config;
    cfg.bundle.algorithm = Algorithm::SparePort;
    Engine spare(cfg);
    spare.record_outcomes(true);
    const auto report = spare.run(merged);

    // The LL port must never carry normal traffic in the conservative run.
    bool disjoint = true;
    for (const auto& e : ref_report.epochs) disjoint = disjoint && e.port_load_bps.back() == 0;

    std::size_t i = 0, mismatches = 0;
    for (const auto& o : spare.outcomes()) {
      if (o.cls != TrafficClass::Normal || o.fate != Fate::Delivered) continue;
      if (i >= ref_delay.size() || o.departure - o.arrival != ref_delay[i]) ++mismatches;
      ++i;
    }
    mismatches += i != ref_delay.size();
    v.pass = v.pass && disjoint && mismatches == 0;
    v.detail << mbps(ll_rate) << ": " << i << " normal packets, " << mismatches << " differ"
             << (disjoint ? "" : " (LL port shared)") << "; ";
    (void)report;
  }
}

void c5(Verdict& v) {
  for (double ll : {1e6, 1e7, 1e8, 1e9}) {
    const double tq = row(fig3_rows(), Algorithm::TwoQueues, ll).report.low_latency.mean_us;
    const double sp = row(fig3_rows(), Algorithm::SparePort, ll).report.low_latency.mean_us;
    const double cons = row(fig3_rows(), Algorithm::Conservative, ll).report.low_latency.mean_us;
    const bool ok = tq < 2.0 && sp >= 4.5 && sp <= 7.0 && cons >= 10 * tq;
    v.pass = v.pass && ok;
    v.detail << mbps(ll) << " tq=" << tq << " sp=" << sp << " cons=" << cons
             << (ok ? "" : " [out of band]") << "; ";
  }
}

void c6(Verdict& v) {
  for (double ll : {1e6, 1e7, 1e8, 1e9}) {
    const double tq = row(fig3_rows(), Algorithm::TwoQueues, ll).report.normalized_energy;
    const double sp = row(fig3_rows(), Algorithm::SparePort, ll).report.normalized_energy;
    bool ok = true;
    if (ll >= 100e6) ok = sp > tq;
    if (ll <= 1e6) ok = std::abs(sp - tq) <= 0.01 * tq;
    v.pass = v.pass && ok;
    v.detail << mbps(ll) << " sp=" << sp << " tq=" << tq << "; ";
  }
}

void c7(Verdict& v) {
  const auto& r = testbed();
  const double cons = r[0].ll_probe.round_trip_us;
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double ratio = cons / r[i].ll_probe.round_trip_us;
    v.pass = v.pass && ratio >= 100;
    v.detail << to_string(r[i].algorithm) << " " << r[i].ll_probe.round_trip_us << " us ("
             << ratio << "x lower); ";
  }
  v.detail << "Conservative " << cons << " us";
}

void c8(Verdict& v) {
  std::mt19937_64 rng(20260101);
  std::size_t runs = 0, packets = 0, bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 1000;
    const std::size_t flows = 1 + rng() % 16;
    const double ll_share = std::uniform_real_distribution<double>(0, 1)(rng);
    std::vector<std::int64_t> t(n);
    std::uniform_int_distribution<std::int64_t> at(0, 400'000 + static_cast<std::int64_t>(rng() % 2'000'000));
    for (auto& x : t) x = at(rng);
    std::sort(t.begin(), t.end());
    std::map<FlowId, std::uint8_t> dscp;
    PacketStream s;
    for (std::size_t i = 0; i < n; ++i) {
      const FlowId f = rng() % flows;
      if (!dscp.count(f)) dscp[f] = std::bernoulli_distribution(ll_share)(rng) ? 46 : 0;
      s.push_back(Packet{Nanos{t[i]}, f, i, static_cast<std::uint32_t>(64 + rng() % 1437), dscp[f]});
    }
    SimConfig cfg;
    cfg.bundle.n_ports = 1 + rng() % 5;
    cfg.port.buffer_limit = 1 + rng() % 200;
    cfg.sampling_period = Nanos{50'000 + static_cast<std::int64_t>(rng() % 500'000)};
    cfg.warmup = 0ns;
    cfg.duration = Nanos{t.back() + 1 + static_cast<std::int64_t>(rng() % 50'000)};
    for (Algorithm a : kAllAlgorithms) {
      cfg.bundle.algorithm = a;
      Engine e(cfg);
      e.record_outcomes(true);
      e.run(s);
      const auto o = testing::oracle_simulate(cfg, s);
      ++runs;
      packets += o.size();
      if (o.size() != e.outcomes().size()) {
        ++bad;
        continue;
      }
      for (std::size_t i = 0; i < o.size(); ++i) {
        const auto& g = e.outcomes()[i];
        if (g.fate != o[i].fate || g.port != o[i].port ||
            (o[i].fate == Fate::Delivered && g.departure != o[i].departure)) {
          ++bad;
          break;
        }
      }
    }
  }
  v.pass = bad == 0;
  v.detail << runs << " runs, " << packets << " packets, " << bad << " runs disagree";
}

void c9(Verdict& v) {
  double worst = 0;
  std::size_t instances = 0;
  auto check = [&](const std::vector<double>& rates, std::size_t k) {
    std::vector<FlowEstimate> est;
    for (std::size_t i = 0; i < rates.size(); ++i)
      est.push_back(FlowEstimate{i, 0, rates[i], TrafficClass::Normal});
    const auto plan = conservative_allocate(est, k, k);
    const double lpt = *std::max_element(plan.port_load_bps.begin(), plan.port_load_bps.end());
    const double opt = testing::optimal_makespan(rates, k);
    worst = std::max(worst, lpt / opt);
    ++instances;
    if (lpt > 4.0 / 3.0 * opt * (1 + 1e-12)) v.pass = false;
  };
  // Every multiset of 1..8 integer rates drawn from 1..6, on 1..3 ports.
  std::vector<double> rates;
  auto enumerate = [&](auto&& self, int min_rate) -> void {
    if (!rates.empty())
      for (std::size_t k = 1; k <= 3; ++k) check(rates, k);
    if (rates.size() == 8) return;
    for (int r = min_rate; r <= 6; ++r) {
      rates.push_back(r);
      self(self, r);
      rates.pop_back();
    }
  };
  enumerate(enumerate, 1);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> real(0.01, 10);
  for (int i = 0; i < 3000; ++i) {
    std::vector<double> r(1 + rng() % 8);
    for (auto& x : r) x = real(rng) * 1e9;
    check(r, 1 + rng() % 3);
  }
  v.detail << instances << " instances, worst LPT/OPT " << worst;
}

void c10(Verdict& v) {
  const Algorithm order[] = {Algorithm::Equitable, Algorithm::Conservative,
                             Algorithm::BoundedGreedy, Algorithm::Greedy};
  double prev = 0;
  for (Algorithm a : order) {
    const double d = row(fig2_rows(), a, 0).report.normal.mean_us;
    v.pass = v.pass && d >= prev;
    prev = d;
    v.detail << to_string(a) << "=" << d << "us ";
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Verdict&)> run;
  };
  const Criterion criteria[] = {
      {1, "wake-delay exactness", c1},
      {2, "port-count reproduction", c2},
      {3, "two-queues energy equals conservative", c3},
      {4, "spare-port leaves normal delays unchanged", c4},
      {5, "low-latency delay bands", c5},
      {6, "energy ordering spare-port vs two-queues", c6},
      {7, "testbed LL probe >=100x lower", c7},
      {8, "oracle equivalence", c8},
      {9, "LPT within 4/3 of optimum", c9},
      {10, "baseline delay ordering", c10},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    failures += !v.pass;
    std::printf("criterion %d: %s - %s: %s\n", c.id, v.pass ? "PASS" : "FAIL", c.name,
                v.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
