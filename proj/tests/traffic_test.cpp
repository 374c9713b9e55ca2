// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "edca/simulator.hpp"
#include "edca/traffic.hpp"

namespace edca {
namespace {

const Seconds kSlot = Microseconds{13.0};

TEST(PoissonSlotProb, ZeroRate) { EXPECT_EQ(poisson_slot_prob(0.0, kSlot), 0.0); }

TEST(PoissonSlotProb, MhdRate) {
  EXPECT_NEAR(poisson_slot_prob(10.0, kSlot), 1.299915504e-4, 1e-13);
}

TEST(PoissonSlotProb, IncreasesTowardOne) {
  double prev = 0.0;
  for (double rate = 1.0; rate < 1e7; rate *= 10.0) {
    const double p = poisson_slot_prob(rate, kSlot);
    EXPECT_GT(p, prev);
    EXPECT_LE(p, 1.0);
    prev = p;
  }
  EXPECT_NEAR(prev, -std::expm1(-13.0), 1e-15);
  EXPECT_EQ(poisson_slot_prob(1e9, kSlot), 1.0);
}

TEST(PoissonSlotProb, RejectsNegativeRate) {
  EXPECT_THROW(poisson_slot_prob(-1.0, kSlot), std::invalid_argument);
}

TEST(ArrivalModel, DefaultRates) {
  const auto m = build_arrival_model(TrafficConfig{}, derive_timing(EdcaConfig{}));
  EXPECT_NEAR(m.per_slot_arrival_prob[AcIndex::be], 1.3e-4, 1e-15);
  EXPECT_NEAR(m.per_slot_arrival_prob[AcIndex::bk], 1.299915504e-4, 1e-13);
  // Renewal cycle: geometric wait for a trigger, then a burst of (k-1)*interval+1 slots
  // that carries k packets.
  const double q = -std::expm1(-13e-6);
  auto renewal = [&](double interval) { return 5.0 / (1.0 / q + 4.0 * interval + 1.0); };
  EXPECT_NEAR(m.per_slot_arrival_prob[AcIndex::vo], renewal(385), 1e-12 * renewal(385));
  EXPECT_NEAR(m.per_slot_arrival_prob[AcIndex::vi], renewal(769), 1e-12 * renewal(769));
  EXPECT_NEAR(m.per_slot_arrival_prob[AcIndex::vi], 6.25e-5, 0.01 * 6.25e-5);
  EXPECT_GT(m.per_slot_arrival_prob[AcIndex::vo], m.per_slot_arrival_prob[AcIndex::vi]);
  ASSERT_TRUE(m.generator_state_dist[AcIndex::vo].has_value());
  EXPECT_FALSE(m.generator_state_dist[AcIndex::be].has_value());
}

TEST(ArrivalModel, NoEventsNoRepetitions) {
  TrafficConfig t;
  t.event_rate_hz = 0.0;
  const auto m = build_arrival_model(t, derive_timing(EdcaConfig{}));
  EXPECT_EQ(m.per_slot_arrival_prob[AcIndex::vo], 0.0);
  EXPECT_EQ(m.per_slot_arrival_prob[AcIndex::vi], 0.0);
}

TEST(RepetitionGenerator, RateBelowSuperposition) {
  for (double rate : {0.1, 1.0, 10.0, 100.0}) {
    TrafficConfig t;
    t.event_rate_hz = rate;
    const auto g = hpd_generator(t, kSlot);
    const double superposed = rate * t.repetition_k * kSlot.count();
    EXPECT_LT(g.arrival_prob(), superposed);
    if (rate <= 0.1) {
      EXPECT_NEAR(g.arrival_prob(), superposed, 0.01 * superposed);
    }
  }
}

TEST(RepetitionGenerator, StationaryLaw) {
  const auto g = denm_generator(TrafficConfig{}, kSlot);
  EXPECT_EQ(g.interval_slots, 769);
  EXPECT_EQ(hpd_generator(TrafficConfig{}, kSlot).interval_slots, 385);
  const auto pi = g.stationary();
  ASSERT_EQ(pi.size(), static_cast<std::size_t>(g.burst_length()) + 1);
  double sum = 0.0, deposits = 0.0;
  for (std::size_t c = 0; c < pi.size(); ++c) {
    sum += pi[c];
    if (g.deposits_at(static_cast<int>(c))) deposits += pi[c];
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_NEAR(deposits, g.arrival_prob(), 1e-18);
}

// Long single-vehicle simulations count arrivals from the event-driven generators.
class TrafficSimulation : public ::testing::Test {
 protected:
  static SimReport run(const TrafficConfig& t, std::int64_t slots) {
    SimConfig cfg;
    cfg.scenario.n_vehicles = 1;
    cfg.scenario.traffic = t;
    cfg.horizon_slots = slots;
    cfg.warmup_slots = 0;
    cfg.seed = 99;
    cfg.randomize_cam_phase = false;
    return run_simulation(cfg);
  }
};

TEST_F(TrafficSimulation, ArrivalCountsMatchModel) {
  const std::int64_t slots = 100'000'000;
  TrafficConfig t;
  const auto report = run(t, slots);
  const auto model = build_arrival_model(t, derive_timing(EdcaConfig{}));
  // CAM arrivals are periodic: floor(k * 7692.3) for k = 0, 1, ...
  const double period = t.cam_period / kSlot;
  EXPECT_EQ(report.generated[AcIndex::be],
            static_cast<std::uint64_t>(std::floor((slots - 1) / period)) + 1);
  for (auto ac : {AcIndex::vo, AcIndex::vi, AcIndex::bk}) {
    const double expected = model.per_slot_arrival_prob[ac] * slots;
    // Bursts carry k packets each, which inflates the count variance by k.
    const double sd = std::sqrt(expected * (ac == AcIndex::bk ? 1.0 : t.repetition_k));
    EXPECT_NEAR(static_cast<double>(report.generated[ac]), expected, 4.0 * sd) << to_string(ac);
  }
}

TEST(MhdArrivals, GapsAreExponential) {
  // Kolmogorov-Smirnov test of the simulator's geometric gap sampler, in seconds,
  // against exponential(10/s).
  const double rate = 10.0;
  const double p = poisson_slot_prob(rate, kSlot);
  Rng rng(2024);
  std::vector<double> gaps(20000);
  for (auto& g : gaps) g = static_cast<double>(rng.geometric(p)) * kSlot.count();
  std::sort(gaps.begin(), gaps.end());
  double d = 0.0;
  const double n = static_cast<double>(gaps.size());
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double cdf = 1.0 - std::exp(-rate * gaps[i]);
    d = std::max({d, std::abs(cdf - i / n), std::abs(cdf - (i + 1) / n)});
  }
  const double critical = 1.628 / std::sqrt(n);  // alpha = 0.01
  EXPECT_LT(d, critical);
}

}  // namespace
}  // namespace edca
