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

#include "eeesim/traffic.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <string>
#include <tuple>

#include "eeesim/errors.hpp"

namespace eeesim {

namespace {

constexpr std::string_view kHeader = "t_ns,flow,bytes,dscp";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

template <typename T>
bool parse_unsigned(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

// Arrival offset of train `k`, in ns, rounded to nearest.
std::int64_t train_offset_ns(std::uint64_t k, std::uint64_t bits_per_train, double rate_bps) {
  const double whole = std::floor(rate_bps);
  if (whole == rate_bps && rate_bps < 1.8e19) {
    const auto rate = static_cast<unsigned __int128>(rate_bps);
    const unsigned __int128 num =
        static_cast<unsigned __int128>(k) * bits_per_train * 1'000'000'000ULL;
    return static_cast<std::int64_t>((num + rate / 2) / rate);
  }
  const long double t = static_cast<long double>(k) * bits_per_train * 1e9L / rate_bps;
  return static_cast<std::int64_t>(std::llround(t));
}

void validate_cbr(const CbrSpec& spec) {
  if (!(spec.rate_bps > 0) || !std::isfinite(spec.rate_bps))
    throw ConfigError("cbr: rate must be positive");
  if (spec.duration <= Nanos::zero()) throw ConfigError("cbr: duration must be positive");
  if (spec.start_offset < Nanos::zero()) throw ConfigError("cbr: start offset must be >= 0");
  if (spec.size < kMinFrameBytes || spec.size > kMaxFrameBytes)
    throw ConfigError("cbr: packet size " + std::to_string(spec.size) + " out of range");
  if (spec.dscp > kMaxDscp) throw ConfigError("cbr: dscp out of range");
  if (spec.burst == 0) throw ConfigError("cbr: burst must be >= 1");
}

}  // namespace

FlowId flow_id_from_token(std::string_view token) {
  FlowId id = 0;
  if (parse_unsigned(token, id)) return id;
  // FNV-1a
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : trim(token)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

PacketStream read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace " + path.string());
  return read_trace(in, path.string());
}

PacketStream read_trace(std::istream& in, const std::string& source_name) {
  PacketStream out;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(source_name, 1, "missing header");
  ++lineno;
  if (trim(line) != kHeader)
    throw ParseError(source_name, lineno, "expected header '" + std::string(kHeader) + "'");

  std::uint64_t seq = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view row = trim(line);
    if (row.empty()) continue;

    std::string_view fields[4];
    std::size_t n = 0;
    for (std::size_t pos = 0; pos <= row.size() && n < 5;) {
      auto comma = row.find(',', pos);
      if (comma == std::string_view::npos) comma = row.size();
      if (n < 4) fields[n] = row.substr(pos, comma - pos);
      ++n;
      pos = comma + 1;
    }
    if (n != 4) throw ParseError(source_name, lineno, "expected 4 comma-separated fields");

    std::uint64_t t_ns = 0;
    std::uint32_t bytes = 0;
    unsigned dscp = 0;
    if (!parse_unsigned(fields[0], t_ns) || t_ns > static_cast<std::uint64_t>(INT64_MAX))
      throw ParseError(source_name, lineno, "bad t_ns '" + std::string(fields[0]) + "'");
    if (trim(fields[1]).empty()) throw ParseError(source_name, lineno, "empty flow");
    if (!parse_unsigned(fields[2], bytes))
      throw ParseError(source_name, lineno, "bad bytes '" + std::string(fields[2]) + "'");
    if (!parse_unsigned(fields[3], dscp) || dscp > kMaxDscp)
      throw ParseError(source_name, lineno, "bad dscp '" + std::string(fields[3]) + "'");

    Packet p{Nanos{static_cast<std::int64_t>(t_ns)}, flow_id_from_token(fields[1]), seq,
             bytes, static_cast<std::uint8_t>(dscp)};
    try {
      validate_packet(p);
    } catch (const ValidationError& e) {
      throw ParseError(source_name, lineno, e.what());
    }
    if (!out.empty() && p.arrival < out.back().arrival) {
      throw ValidationError(source_name + ":" + std::to_string(lineno) +
                            ": timestamp goes backwards");
    }
    out.push_back(p);
    ++seq;
  }
  return out;
}

void write_trace(const std::filesystem::path& path, std::span<const Packet> stream) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write trace " + path.string());
  write_trace(out, stream);
  if (!out) throw ConfigError("write failed for " + path.string());
}

void write_trace(std::ostream& out, std::span<const Packet> stream) {
  out << kHeader << '\n';
  std::string buf;
  buf.reserve(1 << 16);
  char num[32];
  auto put = [&](auto v) {
    auto [end, ec] = std::to_chars(num, num + sizeof num, v);
    buf.append(num, end);
  };
  for (const auto& p : stream) {
    put(p.arrival.count());
    buf.push_back(',');
    put(p.flow);
    buf.push_back(',');
    put(p.size);
    buf.push_back(',');
    put(static_cast<unsigned>(p.dscp));
    buf.push_back('\n');
    if (buf.size() > (1 << 16) - 128) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

PacketStream scale_trace(std::span<const Packet> stream, double factor) {
  if (!(factor > 0) || !std::isfinite(factor))
    throw ConfigError("scale factor must be positive and finite");
  PacketStream out(stream.begin(), stream.end());
  if (factor == 1.0) return out;
  for (auto& p : out) {
    const long double t = static_cast<long double>(p.arrival.count()) / factor;
    p.arrival = Nanos{static_cast<std::int64_t>(std::llround(t))};
  }
  return out;
}

PacketStream gen_cbr(const CbrSpec& spec) {
  validate_cbr(spec);
  const std::uint64_t bits_per_train = std::uint64_t{spec.size} * 8 * spec.burst;
  const std::int64_t end = spec.start_offset.count() + spec.duration.count();

  PacketStream out;
  const double expected = spec.rate_bps * static_cast<double>(spec.duration.count()) /
                          (8e9 * spec.size);
  if (expected < 5e8) out.reserve(static_cast<std::size_t>(expected) + spec.burst + 1);

  std::uint64_t seq = 0;
  for (std::uint64_t k = 0;; ++k) {
    const std::int64_t t = spec.start_offset.count() + train_offset_ns(k, bits_per_train, spec.rate_bps);
    if (t >= end) break;
    for (std::uint32_t b = 0; b < spec.burst; ++b)
      out.push_back(Packet{Nanos{t}, spec.flow, seq++, spec.size, spec.dscp});
  }
  return out;
}

PacketStream gen_aggregate(const AggregateSpec& spec) {
  if (spec.flows == 0) throw ConfigError("aggregate: flows must be >= 1");
  if (!(spec.total_rate_bps > 0)) throw ConfigError("aggregate: rate must be positive");
  const double per_flow = spec.total_rate_bps / spec.flows;
  const long double train_period_ns =
      static_cast<long double>(spec.size) * 8 * spec.burst * 1e9L / per_flow;

  std::vector<PacketStream> parts;
  parts.reserve(spec.flows);
  for (std::uint32_t i = 0; i < spec.flows; ++i) {
    CbrSpec c;
    c.rate_bps = per_flow;
    c.size = spec.size;
    c.dscp = spec.dscp;
    c.flow = spec.first_flow + i;
    c.burst = spec.burst;
    Nanos offset{0};
    if (spec.phasing == Phasing::Spread)
      offset = Nanos{static_cast<std::int64_t>(std::llround(train_period_ns * i / spec.flows))};
    c.start_offset = spec.start_offset + offset;
    c.duration = spec.duration - offset;
    if (c.duration <= Nanos::zero()) continue;
    parts.push_back(gen_cbr(c));
  }
  return merge(std::span<const PacketStream>(parts));
}

void validate_stream(std::span<const Packet> stream, const std::string& name) {
  for (std::size_t i = 1; i < stream.size(); ++i) {
    if (stream[i].arrival < stream[i - 1].arrival)
      throw ValidationError(name + ": arrival time decreases at index " + std::to_string(i));
    if (stream[i].seq <= stream[i - 1].seq)
      throw ValidationError(name + ": seq not strictly increasing at index " + std::to_string(i));
  }
}

PacketStream merge(std::span<const std::span<const Packet>> streams) {
  std::size_t total = 0;
  for (std::size_t s = 0; s < streams.size(); ++s) {
    validate_stream(streams[s], "merge input " + std::to_string(s));
    total += streams[s].size();
  }

  // (arrival, stream index, seq, position)
  using Head = std::tuple<std::int64_t, std::size_t, std::uint64_t, std::size_t>;
  std::priority_queue<Head, std::vector<Head>, std::greater<>> heads;
  for (std::size_t s = 0; s < streams.size(); ++s)
    if (!streams[s].empty()) heads.emplace(streams[s][0].arrival.count(), s, streams[s][0].seq, 0);

  PacketStream out;
  out.reserve(total);
  while (!heads.empty()) {
    auto [t, s, seq, pos] = heads.top();
    heads.pop();
    Packet p = streams[s][pos];
    p.seq = out.size();
    out.push_back(p);
    if (++pos < streams[s].size()) heads.emplace(streams[s][pos].arrival.count(), s, streams[s][pos].seq, pos);
  }
  return out;
}

PacketStream merge(std::span<const PacketStream> streams) {
  std::vector<std::span<const Packet>> views(streams.begin(), streams.end());
  return merge(std::span<const std::span<const Packet>>(views));
}

double mean_rate_bps(std::span<const Packet> stream) {
  if (stream.size() < 2) return 0;
  const auto span_ns = (stream.back().arrival - stream.front().arrival).count();
  if (span_ns <= 0) return 0;
  long double bits = 0;
  for (const auto& p : stream) bits += p.size * 8.0L;
  return static_cast<double>(bits * 1e9L / span_ns);
}

}  // namespace eeesim
