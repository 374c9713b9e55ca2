// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "edca/batch.hpp"
#include "edca/metrics.hpp"
#include "edca/simulator.hpp"
#include "support/enumeration.hpp"

namespace edca {
namespace {

using testing::IndicatorOracle;
using testing::lone_counted;

ChannelInputs random_inputs(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 0.2);
  ChannelInputs in;
  double theta_hat = 0.0;
  for (auto ac : kAllAcs) {
    in.transmit_start[ac] = u(gen);
    in.transmit_total[ac] = std::min(1.0, in.transmit_start[ac] * 3.0 + u(gen));
    in.theta[ac] = u(gen);
    theta_hat += in.theta[ac];
  }
  return in;
}

TEST(MetricsEnumeration, TinyNetworks) {
  std::mt19937_64 gen(21);
  for (int n : {2, 3}) {
    for (int trial = 0; trial < 5; ++trial) {
      const ChannelInputs in = random_inputs(gen);
      const double bw = 6e6;

      IndicatorOracle occ{in.transmit_total, n};
      EXPECT_NEAR(channel_utilization(in, n), occ.at_least_one(), 1e-12);

      const Throughput t = throughput(in, n, bw);
      for (std::size_t i = 0; i < kNumAcs; ++i)
        EXPECT_NEAR(t.per_ac.values[i] / bw, occ.lone_vehicle_on(i), 1e-12);
      EXPECT_NEAR(t.total / bw, lone_counted(in.transmit_total, in.theta, n), 1e-12);

      IndicatorOracle starts{in.transmit_start, n};
      const double none = 1.0 - starts.at_least_one();
      EXPECT_NEAR(collision_probability(in, n),
                  1.0 - none - lone_counted(in.transmit_start, in.theta, n), 1e-12);
      EXPECT_NEAR(vehicle_collision_probability(in, n), starts.two_or_more_vehicles(), 1e-12);
    }
  }
}

TEST(MetricsEnumeration, TwoAcsTwoVehicles) {
  ChannelInputs in;
  in.transmit_start[AcIndex::vo] = 0.1;
  in.transmit_start[AcIndex::vi] = 0.1;
  in.theta[AcIndex::vo] = 0.5;
  in.theta[AcIndex::vi] = 0.5;
  const double expected = 1.0 - std::pow(0.81, 2) - 2.0 * (0.05 + 0.05) * 0.81;
  EXPECT_NEAR(collision_probability(in, 2), expected, 1e-15);
  EXPECT_NEAR(collision_probability(in, 2), 1.0 - (1.0 - IndicatorOracle{in.transmit_start, 2}.at_least_one()) -
                                                lone_counted(in.transmit_start, in.theta, 2),
              1e-12);
}

TEST(Metrics, DegenerateCases) {
  ChannelInputs quiet;
  EXPECT_EQ(collision_probability(quiet, 50), 0.0);
  EXPECT_EQ(channel_utilization(quiet, 50), 0.0);
  EXPECT_EQ(throughput(quiet, 50, 6e6).total, 0.0);

  ChannelInputs one;
  one.transmit_total[AcIndex::be] = 0.5;
  EXPECT_EQ(channel_utilization(one, 1), 0.5);
  EXPECT_EQ(throughput(one, 1, 6e6).per_ac[AcIndex::be], 3e6);

  EXPECT_THROW(channel_utilization(one, 0), std::invalid_argument);
  EXPECT_THROW(throughput(one, 1, 0.0), std::invalid_argument);
}

ConvergedSolution isolated_cycle_solution() {
  ConvergedSolution sol;
  sol.scenario.n_vehicles = 1;
  sol.timing = derive_timing(sol.scenario.edca);
  sol.arrivals = build_arrival_model(sol.scenario.traffic, sol.timing);
  for (auto ac : kAllAcs) {
    ChainParams p;
    p.shape = chain_shape(ac, sol.timing, sol.scenario.edca.cw);
    p.phi = 1.0;
    p.backoff_busy.assign(static_cast<std::size_t>(p.shape.omega - 1), 0.0);
    sol.dists[ac] = stationary_oracle(p);
    sol.queues[ac] = queue_steady_state(0.0, 0.5, sol.scenario.queue_depth);
    sol.idle_empty_prob[ac] = 0.0;
  }
  return sol;
}

TEST(AverageDelay, DeterministicCycle) {
  const auto sol = isolated_cycle_solution();
  const auto d = average_delay(sol);
  const double slot = sol.timing.slot_time.count();
  for (auto ac : kAllAcs) {
    const int om = sol.timing.omega[ac], th = sol.timing.theta_tx;
    const double expected = (om + th + 1) * slot + (th - 1) * slot;
    EXPECT_NEAR(Seconds{d.delay[ac]}.count(), expected, 1e-15);
    EXPECT_NEAR(Seconds{d.service_time[ac]}.count(), expected, 1e-15);
  }
}

TEST(AverageDelay, MatchesIsolatedVehicleTimestamps) {
  // An isolated vehicle never defers, so head-of-line to end of transmission spans the
  // Omega + theta + 1 slot cycle; the analytic service time adds theta - 1 on top.
  const auto analytic = average_delay(isolated_cycle_solution());
  SimConfig cfg;
  cfg.scenario.n_vehicles = 1;
  cfg.horizon_slots = 20'000'000;
  cfg.warmup_slots = 0;
  const auto sim = run_simulation(cfg);
  const double slot = sim.slot_time.count();
  const int th = derive_timing(cfg.scenario.edca).theta_tx;
  for (auto ac : kAllAcs) {
    ASSERT_GT(sim.transmitted[ac], 0u);
    EXPECT_NEAR(Seconds{sim.service_time[ac]}.count() + (th - 1) * slot,
                Seconds{analytic.service_time[ac]}.count(), 1e-12);
  }
}

TEST(AverageDelay, EdgeCases) {
  auto sol = isolated_cycle_solution();
  sol.arrivals.per_slot_arrival_prob[AcIndex::vo] = 0.0;
  ChainParams p;
  p.shape = sol.dists[AcIndex::vi].shape;
  p.backoff_busy.assign(static_cast<std::size_t>(p.shape.omega - 1), 0.0);
  sol.dists[AcIndex::vi] = closed_form_steady_state(p);  // never leaves idle
  const auto d = average_delay(sol);
  EXPECT_EQ(d.delay[AcIndex::vo].count(), 0.0);
  EXPECT_TRUE(std::isinf(d.delay[AcIndex::vi].count()));
}

TEST(ComputeMetrics, FixedPointInvariants) {
  for (int n = 10; n <= 300; n += 10) {
    Scenario sc;
    sc.n_vehicles = n;
    const auto sol = solve_fixed_point(sc, SolverSettings{});
    const auto m = compute_metrics(sol);
    const double bw = sc.edca.cch_rate_bps;
    EXPECT_GE(m.channel_utilization + 1e-12, m.s_tot / bw) << n;
    for (double p : {m.p_col_tot, m.channel_utilization}) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
    for (auto ac : kAllAcs) {
      EXPECT_LE(m.throughput[ac], bw);
      EXPECT_GE(m.drop_prob[ac], 0.0);
      EXPECT_LE(m.p_qe[ac], 1.0);
    }
    EXPECT_LE(m.delay[AcIndex::vo], m.delay[AcIndex::vi]) << n;
    EXPECT_LE(m.delay[AcIndex::vi], m.delay[AcIndex::be]) << n;
    EXPECT_LE(m.delay[AcIndex::be], m.delay[AcIndex::bk]) << n;
  }
}

}  // namespace
}  // namespace edca
