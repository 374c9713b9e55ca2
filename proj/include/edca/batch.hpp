// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "edca/config.hpp"
#include "edca/metrics.hpp"
#include "edca/simulator.hpp"

namespace edca {

enum class RunMode { analytic, sim, both };

struct BatchOptions {
  RunMode mode = RunMode::analytic;
  bool use_oracle = false;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;         // 0: hardware concurrency
  std::ostream* trace = nullptr;  // forces a single worker
  bool check_uniqueness = true;
};

/// One CSV line. Fields that do not apply to a source are left empty.
struct ResultRow {
  int n = 0;
  std::string source;
  double p_col_tot = 0.0;
  double p_col_vehicle = 0.0;
  double channel_utilization = 0.0;
  double s_tot = 0.0;
  double theta_hat_s = 0.0;
  double theta_hat_o = 0.0;
  PerAc<double> theta{};
  PerAc<double> delay_ms{};
  PerAc<double> service_ms{};
  PerAc<double> throughput{};
  PerAc<double> p_qe{};
  PerAc<double> queue_full{};
  PerAc<double> drop_prob{};
  std::optional<int> iterations_used;
  std::optional<double> residual;
  std::optional<bool> multiple_fixed_points;
};

/// Probability that two or more vehicles start a transmission in the same slot when
/// vehicles are independent and each AC starts independently.
inline double vehicle_collision_probability(const ChannelInputs& in, int n) {
  double quiet = 1.0;
  for (double p : in.transmit_start) quiet *= 1.0 - p;
  return 1.0 - std::pow(quiet, n) - n * (1.0 - quiet) * std::pow(quiet, n - 1);
}

inline ResultRow analytic_row(const ConvergedSolution& sol) {
  const MetricsReport m = compute_metrics(sol);
  ResultRow r;
  r.n = sol.scenario.n_vehicles;
  r.source = "analytic";
  r.p_col_tot = m.p_col_tot;
  r.p_col_vehicle = vehicle_collision_probability(channel_inputs(sol), r.n);
  r.channel_utilization = m.channel_utilization;
  r.s_tot = m.s_tot;
  r.theta_hat_s = sol.coupling.theta_hat_s;
  r.theta_hat_o = sol.coupling.theta_hat_o;
  for (auto ac : kAllAcs) {
    r.theta[ac] = sol.coupling.theta[ac];
    r.delay_ms[ac] = m.delay[ac].count();
    r.service_ms[ac] = m.service_time[ac].count();
    r.throughput[ac] = m.throughput[ac];
    r.p_qe[ac] = m.p_qe[ac];
    r.queue_full[ac] = m.queue_full[ac];
    r.drop_prob[ac] = m.drop_prob[ac];
  }
  r.iterations_used = sol.iterations_used;
  r.residual = sol.residual;
  return r;
}

inline ResultRow sim_row(const std::vector<SimReport>& reps) {
  ResultRow r;
  r.n = reps.front().n_vehicles;
  r.source = "sim";
  const double k = static_cast<double>(reps.size());
  for (const auto& s : reps) {
    r.p_col_tot += s.p_col_tot / k;
    r.p_col_vehicle += s.p_col_tot / k;
    r.channel_utilization += s.channel_utilization / k;
    r.s_tot += s.s_tot / k;
    r.theta_hat_s += s.theta_hat_s / k;
    r.theta_hat_o += s.theta_hat_o / k;
    for (auto ac : kAllAcs) {
      r.theta[ac] += s.theta[ac] / k;
      r.delay_ms[ac] += s.delay[ac].count() / k;
      r.service_ms[ac] += s.service_time[ac].count() / k;
      r.throughput[ac] += s.throughput[ac] / k;
      r.p_qe[ac] += s.p_qe[ac] / k;
      r.queue_full[ac] += s.queue_full[ac] / k;
      r.drop_prob[ac] += s.drop_prob[ac] / k;
    }
  }
  return r;
}

inline std::vector<std::string> csv_columns() {
  std::vector<std::string> cols{"n",           "source",      "p_col_tot",  "p_col_vehicle",
                                "channel_utilization", "s_tot_bps", "theta_hat_s", "theta_hat_o"};
  for (const char* f : {"theta", "delay_ms", "service_ms", "throughput_bps", "p_qe", "queue_full",
                        "drop_prob"})
    for (auto ac : kAllAcs) cols.push_back(std::string(f) + "_" + std::string(to_string(ac)));
  cols.insert(cols.end(), {"iterations_used", "residual", "multiple_fixed_points"});
  return cols;
}

namespace detail {
inline std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}
}  // namespace detail

inline void write_csv_header(std::ostream& os) {
  const auto cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
}

inline void write_csv_row(std::ostream& os, const ResultRow& r) {
  using detail::fmt;
  os << r.n << ',' << r.source << ',' << fmt(r.p_col_tot) << ',' << fmt(r.p_col_vehicle) << ','
     << fmt(r.channel_utilization) << ',' << fmt(r.s_tot) << ',' << fmt(r.theta_hat_s) << ','
     << fmt(r.theta_hat_o);
  for (const PerAc<double>* f : {&r.theta, &r.delay_ms, &r.service_ms, &r.throughput, &r.p_qe,
                                 &r.queue_full, &r.drop_prob})
    for (auto ac : kAllAcs) os << ',' << fmt((*f)[ac]);
  os << ',' << (r.iterations_used ? std::to_string(*r.iterations_used) : "") << ','
     << (r.residual ? fmt(*r.residual) : "") << ','
     << (r.multiple_fixed_points ? (*r.multiple_fixed_points ? "1" : "0") : "") << '\n';
}

/// Failure at one sweep point; rows before it in sweep order are still valid.
struct BatchFailure {
  int n = 0;
  std::string message;
};

struct BatchResult {
  std::vector<ResultRow> rows;  // sweep order, analytic before sim for equal N
  std::optional<BatchFailure> failure;
};

inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Runs every sweep point. Points are distributed over a worker pool; rows come back in
/// sweep order. `on_row` sees each row of the valid prefix, in order.
inline BatchResult run_batch(const ScenarioConfig& cfg, const BatchOptions& opt,
                             const std::function<void(const ResultRow&)>& on_row = {}) {
  if (cfg.n_vehicles.empty()) throw ConfigError("no scenarios: the N sweep is empty");
  SolverSettings settings = cfg.solver;
  if (opt.use_oracle) settings.use_closed_form = false;
  const std::uint64_t base_seed = opt.seed.value_or(cfg.sim.seed);

  const std::size_t points = cfg.n_vehicles.size();
  struct Slot {
    std::vector<ResultRow> rows;
    std::optional<std::string> error;
    bool done = false;
  };
  std::vector<Slot> slots(points);

  auto evaluate = [&](std::size_t i) {
    const int n = cfg.n_vehicles[i];
    const Scenario sc = cfg.scenario_for(n);
    Slot& out = slots[i];
    try {
      if (opt.mode != RunMode::sim) {
        const ConvergedSolution sol = solve_fixed_point(sc, settings);
        ResultRow row = analytic_row(sol);
        if (opt.check_uniqueness)
          row.multiple_fixed_points = check_uniqueness(sol, settings).multiple_fixed_points;
        out.rows.push_back(std::move(row));
      }
      if (opt.mode != RunMode::analytic) {
        std::vector<SimReport> reps;
        for (int rep = 0; rep < cfg.sim.replicates; ++rep) {
          SimConfig sim;
          sim.scenario = sc;
          sim.horizon_slots = cfg.sim.horizon_slots;
          sim.warmup_slots = cfg.sim.warmup_slots;
          sim.seed = derive_seed(base_seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(rep));
          sim.randomize_cam_phase = cfg.sim.randomize_cam_phase;
          sim.trace = opt.trace;
          reps.push_back(run_simulation(sim));
        }
        out.rows.push_back(sim_row(reps));
      }
    } catch (const NonConvergence& e) {
      out.error = std::string(e.what());
    } catch (const std::exception& e) {
      out.error = std::string(e.what());
    }
    out.done = true;
  };

  const unsigned workers = opt.trace ? 1u : std::min<unsigned>(resolve_workers(opt.workers),
                                                             static_cast<unsigned>(points));
  if (workers <= 1) {
    for (std::size_t i = 0; i < points; ++i) evaluate(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < points; i = next++) evaluate(i);
      });
    for (auto& t : pool) t.join();
  }

  BatchResult result;
  for (std::size_t i = 0; i < points; ++i) {
    if (slots[i].error) {
      result.failure = BatchFailure{cfg.n_vehicles[i], *slots[i].error};
      break;
    }
    for (auto& row : slots[i].rows) {
      if (on_row) on_row(row);
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

}  // namespace edca
