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

#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "eeesim/errors.hpp"
#include "eeesim/traffic.hpp"

using namespace eeesim;
using namespace std::chrono_literals;

namespace {

PacketStream parse(const std::string& text) {
  std::istringstream in(text);
  return read_trace(in, "t.csv");
}

PacketStream at_times(std::initializer_list<std::int64_t> ns, FlowId flow = 0) {
  PacketStream s;
  for (auto t : ns) s.push_back(Packet{Nanos{t}, flow, s.size(), 100, 0});
  return s;
}

}  // namespace

TEST_CASE("read_trace maps fields") {
  const auto s = parse("t_ns,flow,bytes,dscp\n0,42,1500,0\n1000,7,100,46\n");
  REQUIRE(s.size() == 2);
  CHECK(s[0] == Packet{Nanos{0}, 42, 0, 1500, 0});
  CHECK(s[1] == Packet{Nanos{1000}, 7, 1, 100, 46});
}

TEST_CASE("read_trace accepts string flow keys") {
  const auto s = parse("t_ns,flow,bytes,dscp\n0,10.0.0.1:80>10.0.0.2:5000,64,0\n5,10.0.0.1:80>10.0.0.2:5000,64,0\n");
  REQUIRE(s.size() == 2);
  CHECK(s[0].flow == s[1].flow);
  CHECK(s[0].flow == flow_id_from_token("10.0.0.1:80>10.0.0.2:5000"));
  CHECK(flow_id_from_token("a") != flow_id_from_token("b"));
}

TEST_CASE("read_trace rejects a frame below 64 bytes with its line number") {
  try {
    parse("t_ns,flow,bytes,dscp\n0,1,100,0\n10,1,40,0\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("read_trace error cases") {
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("time,flow,bytes,dscp\n"), ParseError);
  CHECK_THROWS_AS(parse("t_ns,flow,bytes,dscp\n0,1,100\n"), ParseError);
  CHECK_THROWS_AS(parse("t_ns,flow,bytes,dscp\n0,1,100,0,9\n"), ParseError);
  CHECK_THROWS_AS(parse("t_ns,flow,bytes,dscp\n0,1,100,64\n"), ParseError);
  CHECK_THROWS_AS(parse("t_ns,flow,bytes,dscp\n-5,1,100,0\n"), ParseError);
  CHECK_THROWS_AS(parse("t_ns,flow,bytes,dscp\n0,,100,0\n"), ParseError);
  CHECK_THROWS_AS(parse("t_ns,flow,bytes,dscp\n0,1,9217,0\n"), ParseError);
  CHECK_THROWS_AS(parse("t_ns,flow,bytes,dscp\n10,1,100,0\n5,1,100,0\n"), ValidationError);
  CHECK_NOTHROW(parse("t_ns,flow,bytes,dscp\r\n0,1,9216,63\r\n\n"));
}

TEST_CASE("write_trace round-trips") {
  CbrSpec c{.rate_bps = 3e6, .size = 333, .dscp = 12, .duration = 10ms, .flow = 77};
  const auto s = gen_cbr(c);
  std::stringstream buf;
  write_trace(buf, s);
  CHECK(read_trace(buf) == s);
}

TEST_CASE("scale_trace") {
  const auto base = at_times({0, 1000, 3000});
  const auto scaled = scale_trace(base, 10);
  CHECK(scaled == at_times({0, 100, 300}));
  CHECK(scale_trace(base, 1.0) == base);
  CHECK_THROWS_AS(scale_trace(base, 0), ConfigError);
  CHECK_THROWS_AS(scale_trace(base, -2), ConfigError);
}

TEST_CASE("scale factor 2 doubles a 3.25 Gb/s trace to 6.5 Gb/s") {
  AggregateSpec a{.total_rate_bps = 3.25e9, .flows = 13, .size = 1500, .duration = 1s};
  const auto base = gen_aggregate(a);
  const double before = mean_rate_bps(base);
  const double after = mean_rate_bps(scale_trace(base, 2));
  CHECK(after / before == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(after == doctest::Approx(6.5e9).epsilon(1e-3));
}

TEST_CASE("scale then unscale stays within 1 ns") {
  const auto base = gen_cbr(CbrSpec{.rate_bps = 7.3e6, .size = 97, .duration = 50ms, .flow = 1});
  for (double f : {3.0, 0.7, 1.9}) {
    const auto back = scale_trace(scale_trace(base, f), 1 / f);
    for (std::size_t i = 0; i < base.size(); ++i)
      REQUIRE(std::llabs((back[i].arrival - base[i].arrival).count()) <= 1);
  }
}

TEST_CASE("gen_cbr spacing and counts") {
  const auto a = gen_cbr(CbrSpec{.rate_bps = 100e6, .size = 125, .duration = 1ms});
  REQUIRE(a.size() == 100);
  CHECK(a[1].arrival - a[0].arrival == 10us);

  const auto b = gen_cbr(CbrSpec{.rate_bps = 10e6, .size = 125, .duration = 1s});
  CHECK(b.size() == 10000);
  CHECK(b.back().arrival < 1s);

  const auto c = gen_cbr(CbrSpec{.rate_bps = 1e6, .size = 100, .dscp = 46, .duration = 5ms,
                                 .start_offset = 2ms, .flow = 9});
  CHECK(c.front().arrival == 2ms);
  CHECK(c.back().arrival < 7ms);
  const auto ll = DscpSet::expedited_forwarding();
  CHECK(std::all_of(c.begin(), c.end(), [&](const Packet& p) {
    return classify(p, ll) == TrafficClass::LowLatency && p.flow == 9;
  }));
}

TEST_CASE("gen_cbr long-run rate is exact for awkward rates") {
  for (double rate : {3e6, 7.7e6, 123456789.0, 1e9 / 3}) {
    const auto s = gen_cbr(CbrSpec{.rate_bps = rate, .size = 125, .duration = 2s});
    // Packets n and 0 are n * 1000 bits apart in time by construction.
    const double measured = (s.size() - 1) * 1000.0 * 1e9 /
                            static_cast<double>((s.back().arrival - s.front().arrival).count());
    CHECK(std::abs(measured - rate) / rate < 1e-6);
  }
}

TEST_CASE("gen_cbr bursts keep the rate") {
  const auto s = gen_cbr(CbrSpec{.rate_bps = 12e6, .size = 1500, .duration = 1s, .burst = 4});
  CHECK(s.size() == 1000);
  CHECK(s[0].arrival == s[3].arrival);
  CHECK(s[4].arrival - s[0].arrival == 4ms);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i].seq == s[i - 1].seq + 1);
}

TEST_CASE("gen_cbr rejects bad input") {
  CHECK_THROWS_AS(gen_cbr(CbrSpec{.rate_bps = 0, .duration = 1s}), ConfigError);
  CHECK_THROWS_AS(gen_cbr(CbrSpec{.rate_bps = 1e6, .duration = 0s}), ConfigError);
  CHECK_THROWS_AS(gen_cbr(CbrSpec{.rate_bps = 1e6, .size = 40, .duration = 1s}), ConfigError);
  CHECK_THROWS_AS(gen_cbr(CbrSpec{.rate_bps = 1e6, .dscp = 64, .duration = 1s}), ConfigError);
}

TEST_CASE("merge ordering") {
  const auto a = at_times({0, 20}, 1);
  const auto b = at_times({10}, 2);
  const PacketStream ab[] = {a, b};
  const auto m = merge(std::span<const PacketStream>(ab));
  REQUIRE(m.size() == 3);
  CHECK(m[0].flow == 1);
  CHECK(m[1].flow == 2);
  CHECK(m[2].flow == 1);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(m[i].seq == i);

  const PacketStream tie[] = {at_times({5}, 1), at_times({5}, 2)};
  const auto t = merge(std::span<const PacketStream>(tie));
  CHECK(t[0].flow == 1);
  CHECK(t[1].flow == 2);

  const PacketStream one[] = {a};
  CHECK(merge(std::span<const PacketStream>(one)) == a);
}

TEST_CASE("merge preserves the multiset") {
  const PacketStream parts[] = {
      gen_cbr(CbrSpec{.rate_bps = 3e6, .size = 200, .duration = 20ms, .flow = 1}),
      gen_cbr(CbrSpec{.rate_bps = 5e6, .size = 300, .duration = 20ms, .flow = 2}),
      gen_cbr(CbrSpec{.rate_bps = 1e6, .size = 64, .duration = 20ms, .flow = 3})};
  const auto m = merge(std::span<const PacketStream>(parts));
  CHECK(m.size() == parts[0].size() + parts[1].size() + parts[2].size());
  CHECK_NOTHROW(validate_stream(m));
  auto key = [](const Packet& p) { return std::tuple(p.arrival.count(), p.flow, p.size); };
  std::vector<std::tuple<std::int64_t, FlowId, std::uint32_t>> in, out;
  for (const auto& s : parts)
    for (const auto& p : s) in.push_back(key(p));
  for (const auto& p : m) out.push_back(key(p));
  std::sort(in.begin(), in.end());
  std::sort(out.begin(), out.end());
  CHECK(in == out);
}

TEST_CASE("merge rejects an unordered input") {
  PacketStream bad = at_times({10, 5});
  const PacketStream parts[] = {bad};
  CHECK_THROWS_AS(merge(std::span<const PacketStream>(parts)), ValidationError);
}

TEST_CASE("classify") {
  const Packet ef{Nanos{0}, 1, 0, 100, 46};
  const Packet be{Nanos{0}, 1, 0, 100, 0};
  CHECK(classify(ef, DscpSet{46}) == TrafficClass::LowLatency);
  CHECK(classify(be, DscpSet{46}) == TrafficClass::Normal);
  CHECK(classify(ef, DscpSet{}) == TrafficClass::Normal);
}

TEST_CASE("gen_aggregate phasing") {
  AggregateSpec a{.total_rate_bps = 1.2e9, .flows = 4, .size = 1500, .duration = 1ms};
  const auto spread = gen_aggregate(a);
  a.phasing = Phasing::Aligned;
  const auto aligned = gen_aggregate(a);
  CHECK(aligned.size() == 100);
  CHECK(aligned[3].arrival == Nanos{0});
  CHECK(spread[1].arrival == 10us);  // 40 us train period / 4 flows
  CHECK(spread.size() == aligned.size());
}
