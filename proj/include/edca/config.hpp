// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "edca/simulator.hpp"
#include "edca/solver.hpp"

namespace edca {

inline constexpr int kSchemaVersion = 1;

struct SimSettings {
  std::int64_t horizon_slots = 10'000'000;
  std::int64_t warmup_slots = 100'000;
  std::uint64_t seed = 1;
  int replicates = 1;
  bool randomize_cam_phase = true;
};

/// A batch experiment: one scenario template evaluated at every N of the sweep.
struct ScenarioConfig {
  std::string name;
  std::vector<int> n_vehicles;
  EdcaConfig edca;
  TrafficConfig traffic;
  int queue_depth = 10;
  SolverSettings solver;
  SimSettings sim;

  Scenario scenario_for(int n) const { return {edca, traffic, queue_depth, n}; }
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using nlohmann::json;

inline std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  ~Reader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(join_path(path_, it.key()), "unknown key");
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    out = convert<T>(*it, join_path(path_, key));
  }

  const json* section(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string path(const std::string& key) const { return join_path(path_, key); }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
  }

 private:
  template <typename T>
  static T convert(const json& v, const std::string& where) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(where, "expected a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) fail(where, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_unsigned()) return v.get<T>();
        if (v.get<std::int64_t>() < 0) fail(where, "expected a non-negative integer");
      }
      return v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) fail(where, "expected a number");
      return v.get<T>();
    } else {
      if (!v.is_string()) fail(where, "expected a string");
      return v.get<T>();
    }
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline void read_per_ac(Reader& r, const std::string& key, PerAc<int>& out) {
  const json* s = r.section(key);
  if (!s) return;
  Reader sub(*s, r.path(key));
  for (auto ac : kAllAcs) sub.get(std::string(to_string(ac)), out[ac]);
}

inline std::vector<int> read_sweep(const json& v, const std::string& where) {
  std::vector<int> out;
  auto as_n = [&](const json& x, const std::string& at) {
    if (!x.is_number_integer()) Reader::fail(at, "expected an integer");
    return x.get<int>();
  };
  if (v.is_number_integer()) {
    out.push_back(v.get<int>());
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i)
      out.push_back(as_n(v[i], where + "[" + std::to_string(i) + "]"));
  } else if (v.is_object()) {
    int from = 0, to = 0, step = 1;
    Reader r(v, where);
    bool has_from = v.contains("from"), has_to = v.contains("to");
    r.get("from", from);
    r.get("to", to);
    r.get("step", step);
    if (!has_from || !has_to) Reader::fail(where, "sweep needs 'from' and 'to'");
    if (step < 1) Reader::fail(where + ".step", "must be >= 1");
    for (int n = from; n <= to; n += step) out.push_back(n);
  } else {
    Reader::fail(where, "expected an integer, a list or a {from,to,step} sweep");
  }
  for (int n : out)
    if (n < 1) Reader::fail(where, "every N must be >= 1");
  return out;
}

inline std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

/// Parses a JSON scenario document. Every section is optional and falls back to the
/// highway defaults; unknown keys are rejected.
inline ScenarioConfig parse_config(const std::string& text) {
  using detail::Reader;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw ConfigError(detail::line_col(text, at) + ": " + e.what());
  }

  ScenarioConfig cfg;
  cfg.n_vehicles.clear();
  {
    Reader root(doc, "");
    int version = 0;
    if (!doc.is_object() || !doc.contains("schema_version"))
      Reader::fail("schema_version", "missing");
    root.get("schema_version", version);
    if (version != kSchemaVersion)
      Reader::fail("schema_version", "unsupported version " + std::to_string(version));
    root.get("name", cfg.name);
    root.get("queue_depth", cfg.queue_depth);
    if (const auto* n = root.section("n_vehicles")) cfg.n_vehicles = detail::read_sweep(*n, "n_vehicles");

    if (const auto* s = root.section("edca")) {
      Reader r(*s, "edca");
      double slot_us = 13.0, sifs_us = 32.0, rate_mbps = 6.0, overhead_us = 0.0;
      int payload_bytes = 134;
      r.get("slot_time_us", slot_us);
      r.get("sifs_us", sifs_us);
      r.get("payload_bytes", payload_bytes);
      r.get("cch_rate_mbps", rate_mbps);
      r.get("phy_overhead_us", overhead_us);
      detail::read_per_ac(r, "aifsn", cfg.edca.aifsn);
      detail::read_per_ac(r, "cw", cfg.edca.cw);
      cfg.edca.slot_time = Microseconds{slot_us};
      cfg.edca.sifs = Microseconds{sifs_us};
      cfg.edca.payload_bits = payload_bytes * 8;
      cfg.edca.cch_rate_bps = rate_mbps * 1e6;
      cfg.edca.phy_overhead = Microseconds{overhead_us};
    }
    if (const auto* s = root.section("traffic")) {
      Reader r(*s, "traffic");
      double cam_ms = 100.0, denm_ms = 10.0;
      r.get("cam_period_ms", cam_ms);
      r.get("event_rate_hz", cfg.traffic.event_rate_hz);
      r.get("repetition_k", cfg.traffic.repetition_k);
      r.get("denm_repetition_interval_ms", denm_ms);
      r.get("mhd_rate_hz", cfg.traffic.mhd_rate_hz);
      cfg.traffic.cam_period = Milliseconds{cam_ms};
      cfg.traffic.denm_rep_interval = Milliseconds{denm_ms};
    }
    if (const auto* s = root.section("solver")) {
      Reader r(*s, "solver");
      std::string coupling = "waiting_room";
      r.get("tolerance", cfg.solver.tolerance);
      r.get("max_iterations", cfg.solver.max_iterations);
      r.get("damping", cfg.solver.damping);
      r.get("use_closed_form", cfg.solver.use_closed_form);
      r.get("queue_coupling", coupling);
      if (coupling == "waiting_room")
        cfg.solver.queue_coupling = QueueCoupling::waiting_room;
      else if (coupling == "transmit_occupancy")
        cfg.solver.queue_coupling = QueueCoupling::transmit_occupancy;
      else
        Reader::fail("solver.queue_coupling", "expected waiting_room or transmit_occupancy");
    }
    if (const auto* s = root.section("sim")) {
      Reader r(*s, "sim");
      r.get("horizon_slots", cfg.sim.horizon_slots);
      r.get("warmup_slots", cfg.sim.warmup_slots);
      r.get("seed", cfg.sim.seed);
      r.get("replicates", cfg.sim.replicates);
      r.get("randomize_cam_phase", cfg.sim.randomize_cam_phase);
    }
  }

  auto check = [](bool ok, const char* where, const char* what) {
    if (!ok) Reader::fail(where, what);
  };
  check(cfg.queue_depth >= 1, "queue_depth", "must be >= 1");
  check(cfg.solver.tolerance > 0.0, "solver.tolerance", "must be positive");
  check(cfg.solver.max_iterations >= 1, "solver.max_iterations", "must be >= 1");
  check(cfg.solver.damping >= 0.0 && cfg.solver.damping < 1.0, "solver.damping", "must lie in [0,1)");
  check(cfg.sim.replicates >= 1, "sim.replicates", "must be >= 1");
  check(cfg.sim.horizon_slots > cfg.sim.warmup_slots && cfg.sim.warmup_slots >= 0, "sim",
        "need horizon_slots > warmup_slots >= 0");
  try {
    validate(cfg.edca);
  } catch (const std::invalid_argument& e) {
    Reader::fail("edca", e.what());
  }
  try {
    validate(cfg.traffic);
  } catch (const std::invalid_argument& e) {
    Reader::fail("traffic", e.what());
  }
  return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace edca
