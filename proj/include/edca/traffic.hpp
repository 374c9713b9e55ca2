// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "edca/access_category.hpp"
#include "edca/params.hpp"

namespace edca {

/// Message generation parameters. CAM feeds be, HPD vo, DENM vi, MHD bk.
struct TrafficConfig {
  Seconds cam_period = Milliseconds{100.0};
  double event_rate_hz = 1.0;  // HPD and DENM trigger rate
  int repetition_k = 5;
  Seconds denm_rep_interval = Milliseconds{10.0};
  double mhd_rate_hz = 10.0;

  Seconds hpd_rep_interval() const { return denm_rep_interval / 2.0; }
};

inline void validate(const TrafficConfig& t) {
  if (t.repetition_k < 1) throw std::invalid_argument("repetition_k must be >= 1");
  if (!(t.event_rate_hz >= 0.0)) throw std::invalid_argument("event_rate must be >= 0");
  if (!(t.mhd_rate_hz >= 0.0)) throw std::invalid_argument("mhd_rate must be >= 0");
  if (!(t.denm_rep_interval.count() > 0.0))
    throw std::invalid_argument("denm_rep_interval must be positive");
  if (!(t.cam_period.count() > 0.0)) throw std::invalid_argument("cam_period must be positive");
}

/// Probability of at least one Poisson(rate) event within one slot.
inline double poisson_slot_prob(double rate_hz, Seconds slot) {
  if (!(rate_hz >= 0.0)) throw std::invalid_argument("rate must be >= 0");
  if (!(slot.count() > 0.0)) throw std::invalid_argument("slot must be positive");
  return -std::expm1(-rate_hz * slot.count());
}

/// Whole number of slots closest to `d`, at least one.
inline int to_slots(Seconds d, Seconds slot) {
  return std::max(1, static_cast<int>(std::lround(d.count() / slot.count())));
}

/// Generator of k-fold repeated event messages.
///
/// State 0 is idle; an event fires with `trigger_prob` per slot and starts a burst
/// occupying states 1..burst_length(). A packet is deposited in burst states
/// 1, 1+R, ..., 1+(k-1)R where R is the repetition interval, and the generator returns
/// to idle after the last one. Events firing during a burst are absorbed.
struct RepetitionGenerator {
  double trigger_prob = 0.0;
  int repetitions = 1;
  int interval_slots = 1;

  int burst_length() const { return (repetitions - 1) * interval_slots + 1; }

  bool deposits_at(int burst_state) const {
    return burst_state >= 1 && burst_state <= burst_length() &&
           (burst_state - 1) % interval_slots == 0;
  }

  /// Stationary distribution over [idle, burst 1..L].
  std::vector<double> stationary() const {
    const int len = burst_length();
    std::vector<double> pi(static_cast<std::size_t>(len) + 1, 0.0);
    const double idle = 1.0 / (1.0 + trigger_prob * len);
    pi[0] = idle;
    for (int c = 1; c <= len; ++c) pi[static_cast<std::size_t>(c)] = idle * trigger_prob;
    return pi;
  }

  double arrival_prob() const {
    return repetitions * trigger_prob / (1.0 + trigger_prob * burst_length());
  }
};

struct ArrivalModel {
  PerAc<double> per_slot_arrival_prob{};
  PerAc<std::optional<std::vector<double>>> generator_state_dist{};
};

inline RepetitionGenerator hpd_generator(const TrafficConfig& t, Seconds slot) {
  return {poisson_slot_prob(t.event_rate_hz, slot), t.repetition_k,
          to_slots(t.hpd_rep_interval(), slot)};
}

inline RepetitionGenerator denm_generator(const TrafficConfig& t, Seconds slot) {
  return {poisson_slot_prob(t.event_rate_hz, slot), t.repetition_k,
          to_slots(t.denm_rep_interval, slot)};
}

inline ArrivalModel build_arrival_model(const TrafficConfig& traffic, const TimingDerived& timing) {
  validate(traffic);
  const Seconds slot = timing.slot_time;
  if (traffic.cam_period < slot) throw std::invalid_argument("cam_period shorter than one slot");

  ArrivalModel m;
  const auto hpd = hpd_generator(traffic, slot);
  const auto denm = denm_generator(traffic, slot);
  m.per_slot_arrival_prob[AcIndex::vo] = hpd.arrival_prob();
  m.per_slot_arrival_prob[AcIndex::vi] = denm.arrival_prob();
  m.per_slot_arrival_prob[AcIndex::be] = slot.count() / traffic.cam_period.count();
  m.per_slot_arrival_prob[AcIndex::bk] = poisson_slot_prob(traffic.mhd_rate_hz, slot);
  m.generator_state_dist[AcIndex::vo] = hpd.stationary();
  m.generator_state_dist[AcIndex::vi] = denm.stationary();
  return m;
}

}  // namespace edca
