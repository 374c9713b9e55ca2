// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "edca/solver.hpp"

namespace edca {

/// Per-vehicle quantities the channel-level measures are built from.
struct ChannelInputs {
  PerAc<double> transmit_start{};  // pi(T_i,1)
  PerAc<double> transmit_total{};  // sum_j pi(T_i,j)
  PerAc<double> theta{};
};

inline ChannelInputs channel_inputs(const ConvergedSolution& sol) {
  ChannelInputs in;
  for (auto ac : kAllAcs) {
    in.transmit_start[ac] = sol.dists[ac].transmit_start();
    in.transmit_total[ac] = sol.dists[ac].transmit_total();
    in.theta[ac] = sol.coupling.theta[ac];
  }
  return in;
}

namespace detail {
inline void require_n(int n) {
  if (n < 1) throw std::invalid_argument("N must be >= 1");
}
inline double quiet(const PerAc<double>& p) {
  double q = 1.0;
  for (double v : p) q *= 1.0 - v;
  return q;
}
}  // namespace detail

inline double collision_probability(const ChannelInputs& in, int n) {
  detail::require_n(n);
  const double q = detail::quiet(in.transmit_start);
  double lone = 0.0;
  for (auto ac : kAllAcs) lone += in.transmit_start[ac] * in.theta[ac];
  return 1.0 - std::pow(q, n) - n * lone * std::pow(q, n - 1);
}

inline double channel_utilization(const ChannelInputs& in, int n) {
  detail::require_n(n);
  return 1.0 - std::pow(detail::quiet(in.transmit_total), n);
}

struct Throughput {
  PerAc<double> per_ac{};
  double total = 0.0;
};

/// Bits per second.
inline Throughput throughput(const ChannelInputs& in, int n, double bandwidth) {
  detail::require_n(n);
  if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  const double others = std::pow(detail::quiet(in.transmit_total), n - 1);
  Throughput t;
  for (auto ac : kAllAcs) {
    t.per_ac[ac] = bandwidth * n * in.transmit_total[ac] * others;
    t.total += bandwidth * n * in.transmit_total[ac] * in.theta[ac] * others;
  }
  return t;
}

struct DelayBreakdown {
  PerAc<Milliseconds> service_time{};
  PerAc<Milliseconds> delay{};
};

/// Head-of-queue service time psi_i + (theta_tx-1) slots and the queue-weighted delay.
/// An AC without traffic reports zero; one with traffic but no transmissions reports infinity.
inline DelayBreakdown average_delay(const ConvergedSolution& sol) {
  DelayBreakdown out;
  const double slot = sol.timing.slot_time.count();
  for (auto ac : kAllAcs) {
    const double start = sol.dists[ac].transmit_start();
    const double held = 1.0 - sol.idle_empty_prob[ac];
    double service = 0.0;
    if (sol.arrivals.per_slot_arrival_prob[ac] <= 0.0 || held <= 0.0)
      service = 0.0;
    else if (start <= 0.0)
      service = std::numeric_limits<double>::infinity();
    else
      service = held * slot / start + (sol.timing.theta_tx - 1) * slot;
    out.service_time[ac] = Seconds{service};
    out.delay[ac] = Seconds{service * occupancy_weight(sol.queues[ac])};
  }
  return out;
}

struct MetricsReport {
  double p_col_tot = 0.0;
  PerAc<Milliseconds> delay{};
  PerAc<Milliseconds> service_time{};
  PerAc<double> throughput{};  // bits/s
  double s_tot = 0.0;          // bits/s
  double channel_utilization = 0.0;
  PerAc<double> p_qe{};
  PerAc<double> drop_prob{};
  PerAc<double> queue_full{};
};

inline MetricsReport compute_metrics(const ConvergedSolution& sol) {
  const int n = sol.scenario.n_vehicles;
  const ChannelInputs in = channel_inputs(sol);
  MetricsReport r;
  r.p_col_tot = collision_probability(in, n);
  r.channel_utilization = channel_utilization(in, n);
  const Throughput t = throughput(in, n, sol.scenario.edca.cch_rate_bps);
  r.throughput = t.per_ac;
  r.s_tot = t.total;
  const DelayBreakdown d = average_delay(sol);
  r.delay = d.delay;
  r.service_time = d.service_time;
  for (auto ac : kAllAcs) {
    r.p_qe[ac] = queue_empty_prob(sol.queues[ac]);
    r.queue_full[ac] = queue_full_prob(sol.queues[ac]);
    r.drop_prob[ac] = drop_probability(sol.arrivals.per_slot_arrival_prob[ac], sol.queues[ac]);
  }
  return r;
}

}  // namespace edca
