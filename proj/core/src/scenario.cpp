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

#include "eeesim/scenario.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "eeesim/errors.hpp"
#include "json.hpp"

namespace eeesim {

using nlohmann::json;

namespace {

std::int64_t integral(const json& j, const char* key) {
  const double v = j.get<double>();
  if (!std::isfinite(v) || std::floor(v) != v || std::fabs(v) > 9.2e18)
    throw ConfigError(std::string(key) + ": expected an integer, got " + j.dump());
  return static_cast<std::int64_t>(v);
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if constexpr (std::is_same_v<T, double>) {
    return v.get<double>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    return v.get<std::string>();
  } else if constexpr (std::is_same_v<T, bool>) {
    return v.get<bool>();
  } else {
    const auto n = integral(v, key);
    if (n < 0) throw ConfigError(std::string(key) + " must be >= 0");
    return static_cast<T>(n);
  }
}

Nanos get_ns(const json& obj, const char* key, Nanos fallback) {
  if (!obj.contains(key)) return fallback;
  return Nanos{integral(obj.at(key), key)};
}

std::uint8_t get_dscp(const json& obj, const char* key, std::uint8_t fallback) {
  const auto v = get_or<std::uint64_t>(obj, key, fallback);
  if (v > kMaxDscp) throw ConfigError(std::string(key) + " must be in [0, 63]");
  return static_cast<std::uint8_t>(v);
}

NormalSource parse_source(const json& s, Nanos sim_duration) {
  const auto type = get_or<std::string>(s, "type", "");
  if (type == "trace") {
    if (!s.contains("path")) throw ConfigError("trace source needs 'path'");
    return TraceSource{s.at("path").get<std::string>(), get_or<double>(s, "scale", 1.0)};
  }
  const Nanos start = get_ns(s, "start_ns", Nanos::zero());
  const Nanos duration = get_ns(s, "duration_ns", sim_duration - start);
  if (type == "cbr") {
    CbrSpec c;
    c.rate_bps = get_or<double>(s, "rate_bps", 0.0);
    c.size = get_or<std::uint32_t>(s, "size", 1500);
    c.dscp = get_dscp(s, "dscp", 0);
    c.flow = get_or<FlowId>(s, "flow", 0);
    c.burst = get_or<std::uint32_t>(s, "burst", 1);
    c.start_offset = start;
    c.duration = duration;
    return c;
  }
  if (type == "aggregate") {
    AggregateSpec a;
    a.total_rate_bps = get_or<double>(s, "total_rate_bps", 0.0);
    a.flows = get_or<std::uint32_t>(s, "flows", 1);
    a.size = get_or<std::uint32_t>(s, "size", 1500);
    a.dscp = get_dscp(s, "dscp", 0);
    a.first_flow = get_or<FlowId>(s, "first_flow", 0);
    a.burst = get_or<std::uint32_t>(s, "burst", 1);
    const auto phasing = get_or<std::string>(s, "phasing", "spread");
    if (phasing == "spread") a.phasing = Phasing::Spread;
    else if (phasing == "aligned") a.phasing = Phasing::Aligned;
    else throw ConfigError("phasing must be 'spread' or 'aligned'");
    a.start_offset = start;
    a.duration = duration;
    return a;
  }
  throw ConfigError("source type must be trace, cbr or aggregate (got '" + type + "')");
}

std::string pointer_for(std::string key) {
  if (!key.empty() && key.front() == '/') return key;
  for (auto& c : key)
    if (c == '.') c = '/';
  return "/" + key;
}

void apply_overrides(json& doc, std::span<const std::string> overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + o + "' is not key=value");
    const std::string value = o.substr(eq + 1);
    json parsed = json::parse(value, nullptr, false);
    if (parsed.is_discarded()) parsed = value;
    try {
      doc[json::json_pointer(pointer_for(o.substr(0, eq)))] = parsed;
    } catch (const json::exception& e) {
      throw ConfigError("override '" + o + "': " + e.what());
    }
  }
}

Scenario scenario_from_json(const json& doc) {
  Scenario s;
  s.name = get_or<std::string>(doc, "name", "scenario");

  const json bundle = doc.value("bundle", json::object());
  s.config.bundle.n_ports = get_or<std::size_t>(bundle, "n_ports", 5);
  s.config.bundle.capacity_bps = get_or<std::uint64_t>(bundle, "capacity_bps", 10'000'000'000ULL);
  s.config.bundle.bound_fraction = get_or<double>(bundle, "bound_fraction", 0.9);

  const json port = doc.value("port", json::object());
  s.config.port.capacity_bps = s.config.bundle.capacity_bps;
  s.config.port.t_sleep = get_ns(port, "t_sleep_ns", s.config.port.t_sleep);
  s.config.port.t_wake = get_ns(port, "t_wake_ns", s.config.port.t_wake);
  s.config.port.buffer_limit = get_or<std::size_t>(port, "buffer_limit", s.config.port.buffer_limit);
  s.config.port.p_active = get_or<double>(port, "p_active", s.config.port.p_active);
  s.config.port.p_lpi = get_or<double>(port, "p_lpi", s.config.port.p_lpi);

  s.config.sampling_period = get_ns(doc, "sampling_period_ns", s.config.sampling_period);
  s.config.warmup = get_ns(doc, "warmup_ns", s.config.sampling_period);
  s.config.duration = get_ns(doc, "duration_ns", s.config.duration);
  if (doc.contains("ll_dscp")) {
    s.config.ll_dscp = DscpSet{};
    for (const auto& d : doc.at("ll_dscp")) {
      const auto v = integral(d, "ll_dscp");
      if (v < 0 || v > kMaxDscp) throw ConfigError("ll_dscp entries must be in [0, 63]");
      s.config.ll_dscp.insert(static_cast<std::uint8_t>(v));
    }
  }

  for (const auto& src : doc.value("sources", json::array()))
    s.sources.push_back(parse_source(src, s.config.duration));

  if (doc.contains("low_latency") && !doc.at("low_latency").is_null()) {
    const json& ll = doc.at("low_latency");
    LowLatencySpec spec;
    spec.size = get_or<std::uint32_t>(ll, "size", spec.size);
    spec.dscp = get_dscp(ll, "dscp", spec.dscp);
    spec.flow = get_or<FlowId>(ll, "flow", spec.flow);
    spec.start_offset = get_ns(ll, "start_ns", spec.start_offset);
    s.low_latency = spec;
  }

  const json sweep = doc.value("sweep", json::object());
  if (sweep.contains("algorithms")) {
    for (const auto& a : sweep.at("algorithms"))
      s.algorithms.push_back(algorithm_from_string(a.get<std::string>()));
  } else {
    s.algorithms.push_back(algorithm_from_string(get_or<std::string>(doc, "algorithm", "Conservative")));
  }
  for (const auto& r : sweep.value("ll_rates_bps", json::array())) s.ll_rates_bps.push_back(r.get<double>());

  s.output_dir = get_or<std::string>(doc, "output_dir", "out");
  return s;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

void Scenario::validate() const {
  config.validate();
  if (sources.empty() && !(low_latency && !ll_rates_bps.empty()))
    throw ConfigError("scenario '" + name + "' has no traffic sources");
  if (algorithms.empty()) throw ConfigError("scenario '" + name + "' sweeps no algorithms");
  for (double r : ll_rates_bps)
    if (!(r >= 0) || !std::isfinite(r)) throw ConfigError("ll_rates_bps must be >= 0");
  if (!ll_rates_bps.empty() && !low_latency)
    throw ConfigError("ll_rates_bps given without a low_latency template");
}

Scenario parse_scenario(std::string_view json_text, std::span<const std::string> overrides) {
  json doc = json::parse(json_text, nullptr, false, true);
  if (doc.is_discarded() || !doc.is_object()) throw ConfigError("scenario is not a JSON object");
  apply_overrides(doc, overrides);
  try {
    Scenario s = scenario_from_json(doc);
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path, std::span<const std::string> overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  Scenario s = parse_scenario(buf.str(), overrides);
  for (auto& src : s.sources)
    if (auto* t = std::get_if<TraceSource>(&src); t && t->path.is_relative())
      t->path = path.parent_path() / t->path;
  return s;
}

std::vector<SweepPoint> sweep_points(const Scenario& s) {
  std::vector<SweepPoint> pts;
  for (Algorithm a : s.algorithms) {
    if (s.ll_rates_bps.empty()) {
      pts.push_back({a, 0.0});
    } else {
      for (double r : s.ll_rates_bps) pts.push_back({a, r});
    }
  }
  return pts;
}

PacketStream build_normal_traffic(const Scenario& s) {
  std::vector<PacketStream> parts;
  for (const auto& src : s.sources) {
    if (const auto* t = std::get_if<TraceSource>(&src)) {
      parts.push_back(scale_trace(read_trace(t->path), t->scale));
    } else if (const auto* c = std::get_if<CbrSpec>(&src)) {
      parts.push_back(gen_cbr(*c));
    } else {
      parts.push_back(gen_aggregate(std::get<AggregateSpec>(src)));
    }
  }
  if (parts.size() == 1) return std::move(parts.front());
  return merge(std::span<const PacketStream>(parts));
}

PacketStream build_ll_traffic(const Scenario& s, double rate_bps) {
  if (!s.low_latency || rate_bps <= 0) return {};
  const auto& ll = *s.low_latency;
  CbrSpec c;
  c.rate_bps = rate_bps;
  c.size = ll.size;
  c.dscp = ll.dscp;
  c.flow = ll.flow;
  c.start_offset = ll.start_offset;
  c.duration = s.config.duration - ll.start_offset;
  return gen_cbr(c);
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("EEESIM_THREADS")) {
    unsigned n = 0;
    const std::string_view v(env);
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (ec == std::errc{} && ptr == v.data() + v.size() && n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t jobs, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), jobs);
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first;
  std::mutex mu;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; !failed && (i = next.fetch_add(1)) < jobs;) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(mu);
            if (!first) first = std::current_exception();
            failed = true;
          }
        }
      });
    }
  }
  if (first) std::rethrow_exception(first);
}

std::vector<SweepRow> run_sweep(const Scenario& s, unsigned threads) {
  s.validate();
  const PacketStream normal = build_normal_traffic(s);
  long double normal_bits = 0;
  for (const auto& p : normal)
    if (p.arrival < s.config.duration && !s.config.ll_dscp.contains(p.dscp)) normal_bits += p.size * 8.0L;
  const double normal_rate =
      static_cast<double>(normal_bits * 1e9L / static_cast<long double>(s.config.duration.count()));

  const auto points = sweep_points(s);
  std::vector<SweepRow> rows(points.size());
  parallel_for(points.size(), threads, [&](std::size_t i) {
    SimConfig cfg = s.config;
    cfg.bundle.algorithm = points[i].algorithm;
    const PacketStream ll = build_ll_traffic(s, points[i].ll_rate_bps);
    Engine engine(cfg);
    if (ll.empty()) {
      rows[i].report = engine.run(normal);
    } else {
      const std::span<const Packet> parts[] = {normal, ll};
      const PacketStream merged = merge(std::span<const std::span<const Packet>>(parts));
      rows[i].report = engine.run(merged);
    }
    rows[i].point = points[i];
    rows[i].normal_rate_bps = normal_rate;
  });
  return rows;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::ostringstream os;
  os << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    os << to_string(r.point.algorithm) << ',' << format_double(r.point.ll_rate_bps) << ','
       << format_double(r.normal_rate_bps) << ',' << format_double(r.report.normal.mean_us) << ','
       << format_double(r.report.low_latency.mean_us) << ','
       << format_double(r.report.normalized_energy) << ',' << r.report.drops_normal << ','
       << r.report.drops_ll << ',' << format_double(r.report.mean_active_ports) << '\n';
  }
  return os.str();
}

std::filesystem::path write_sweep_outputs(const Scenario& s, std::span<const SweepRow> rows) {
  std::filesystem::create_directories(s.output_dir);
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + p.string());
    out << text;
  };
  for (const auto& r : rows) {
    const auto rate = static_cast<long long>(std::llround(r.point.ll_rate_bps));
    const std::string stem =
        s.name + "_" + std::string(to_string(r.point.algorithm)) + "_ll" + std::to_string(rate);
    write(s.output_dir / (stem + ".json"), to_json(r.report));
    write(s.output_dir / (stem + "_epochs.csv"), epochs_to_csv(r.report));
  }
  const auto csv = s.output_dir / (s.name + ".csv");
  write(csv, sweep_csv(rows));
  return csv;
}

}  // namespace eeesim
