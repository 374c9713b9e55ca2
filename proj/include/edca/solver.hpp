// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "edca/ac_chain.hpp"
#include "edca/params.hpp"
#include "edca/queue.hpp"
#include "edca/stationary.hpp"
#include "edca/traffic.hpp"

namespace edca {

/// One operating point of the model.
struct Scenario {
  EdcaConfig edca;
  TrafficConfig traffic;
  int queue_depth = 10;
  int n_vehicles = 1;
};

/// How the device queue is driven by the AC chain.
enum class QueueCoupling {
  /// The queue holds packets waiting behind the one owned by the AC chain. Arrivals join it
  /// while the AC is not idle-and-empty; it drains once per service time (slot / psi_i).
  waiting_room,
  /// The queue is served with probability P_s = sum_j pi(T_j) per slot.
  transmit_occupancy,
};

struct SolverSettings {
  double tolerance = 1e-9;
  int max_iterations = 10000;
  double damping = 0.5;
  bool use_closed_form = true;
  QueueCoupling queue_coupling = QueueCoupling::waiting_room;
};

struct ConvergedSolution {
  Scenario scenario;
  TimingDerived timing;
  ArrivalModel arrivals;
  CouplingState coupling;
  PerAc<AcDistribution> dists;
  PerAc<QueueDistribution> queues;
  PerAc<double> service_prob{};     // per-slot departure probability fed to the queue
  PerAc<double> idle_empty_prob{};  // P_I
  int iterations_used = 0;
  double residual = 0.0;
};

class InvalidScenario : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(double residual, ConvergedSolution last)
      : std::runtime_error("fixed point did not converge (residual " + std::to_string(residual) +
                           ")"),
        residual_(residual),
        last_(std::move(last)) {}

  double residual() const noexcept { return residual_; }
  const ConvergedSolution& last_iterate() const noexcept { return last_; }

 private:
  double residual_;
  ConvergedSolution last_;
};

/// Starting point of the iteration.
enum class Initialization {
  quiet,      // empty queues, idle channel
  saturated,  // backlogged queues, busy channel
};

namespace detail {

inline constexpr int kStallWindow = 50;
inline constexpr double kMinStep = 1.0 / 64.0;

// The iterate, flattened so damping and the residual treat every variable alike.
struct Iterate {
  PerAc<double> p_qe = PerAc<double>::filled(1.0);
  PerAc<double> theta{};
  PerAc<double> p_s{};
  PerAc<double> service{};
  PerAc<double> idle_empty = PerAc<double>::filled(1.0);
  double theta_hat_s = 0.0;
  double theta_hat_o = 0.0;

  template <typename F>
  void for_each(F&& f) {
    for (auto* arr : {&p_qe, &theta, &p_s, &service, &idle_empty})
      for (auto& v : *arr) f(v);
    f(theta_hat_s);
    f(theta_hat_o);
  }

  std::vector<double> flat() const {
    std::vector<double> out;
    auto copy = *this;
    copy.for_each([&](double& v) { out.push_back(v); });
    return out;
  }
};

struct Sweep {
  Iterate next;
  CouplingState coupling;
  PerAc<AcDistribution> dists;
  PerAc<QueueDistribution> queues;
};

inline Sweep sweep(const Scenario& sc, const TimingDerived& timing, const ArrivalModel& arrivals,
                   const SolverSettings& settings, const Iterate& x) {
  Sweep out;
  const auto& a = arrivals.per_slot_arrival_prob;
  for (auto ac : kAllAcs) {
    const double p_in = settings.queue_coupling == QueueCoupling::waiting_room
                            ? a[ac] * (1.0 - x.idle_empty[ac])
                            : a[ac];
    const double p_srv = settings.queue_coupling == QueueCoupling::waiting_room ? x.service[ac]
                                                                                : x.p_s[ac];
    out.queues[ac] = queue_steady_state(std::clamp(p_in, 0.0, 1.0), std::clamp(p_srv, 0.0, 1.0),
                                        sc.queue_depth);
  }

  CouplingState& c = out.coupling;
  c.p_qe = x.p_qe;
  c.p_arr = a;
  c.phi = coupling_probs(a, c.p_qe);
  c.theta = x.theta;
  c.theta_hat_s = x.theta_hat_s;
  c.theta_hat_o = x.theta_hat_o;
  c.p_s = x.p_s;

  for (auto ac : kAllAcs) {
    const auto params = chain_params(ac, c, timing, sc.edca.cw);
    out.dists[ac] = settings.use_closed_form ? closed_form_steady_state(params)
                                             : stationary_oracle(params);
  }

  const BusyRatios busy = busy_ratios(out.dists, sc.n_vehicles);
  PerAc<double> pi_idle{};
  for (auto ac : kAllAcs) pi_idle[ac] = out.dists[ac].idle();

  Iterate& n = out.next;
  for (auto ac : kAllAcs) n.p_qe[ac] = queue_empty_prob(out.queues[ac]);
  n.theta = busy.theta;
  n.theta_hat_s = busy.theta_hat_s;
  n.theta_hat_o = busy.theta_hat_o;
  n.idle_empty = idle_with_empty_queue(pi_idle, c.p_qe);
  for (auto ac : kAllAcs) {
    n.p_s[ac] = out.dists[ac].transmit_total();
    const double held = 1.0 - n.idle_empty[ac];
    n.service[ac] = held > 0.0 ? std::min(1.0, out.dists[ac].transmit_start() / held) : 1.0;
  }
  return out;
}

inline Iterate initial_iterate(const TimingDerived& timing, Initialization init) {
  Iterate x;
  for (auto ac : kAllAcs) {
    const double uncontended = 1.0 / (timing.omega[ac] + timing.theta_tx);
    x.p_s[ac] = uncontended;
    x.service[ac] = uncontended;
  }
  if (init == Initialization::saturated) {
    x.p_qe = PerAc<double>::filled(0.0);
    x.idle_empty = PerAc<double>::filled(0.0);
    x.theta_hat_s = 0.5;
    x.theta_hat_o = 0.9;
    x.theta = PerAc<double>::filled(0.5 / kNumAcs);
  }
  return x;
}

}  // namespace detail

inline void validate(const Scenario& sc) {
  if (sc.n_vehicles < 1) throw InvalidScenario("N must be >= 1");
  if (sc.queue_depth < 1) throw InvalidScenario("queue depth must be >= 1");
  try {
    validate(sc.edca);
    validate(sc.traffic);
  } catch (const std::invalid_argument& e) {
    throw InvalidScenario(e.what());
  }
}

/// Iterates generators -> queues -> AC chains -> busy ratios to a self-consistent point.
/// The residual is the undamped change of one sweep, so a returned solution reproduces
/// itself within `tolerance` when swept again.
inline ConvergedSolution solve_fixed_point(const Scenario& sc, const SolverSettings& settings,
                                           Initialization init = Initialization::quiet) {
  validate(sc);
  if (!(settings.tolerance > 0.0) || settings.max_iterations < 1)
    throw std::invalid_argument("invalid solver settings");
  if (!(settings.damping >= 0.0 && settings.damping < 1.0))
    throw std::invalid_argument("damping must lie in [0,1)");

  const TimingDerived timing = derive_timing(sc.edca);
  const ArrivalModel arrivals = build_arrival_model(sc.traffic, timing);

  detail::Iterate x = detail::initial_iterate(timing, init);
  double step = 1.0;  // the first sweep replaces the arbitrary initial guess outright
  double best_residual = INFINITY;
  int stalled = 0;

  auto package = [&](detail::Sweep&& s, int iterations, double residual) {
    ConvergedSolution sol;
    sol.scenario = sc;
    sol.timing = timing;
    sol.arrivals = arrivals;
    sol.coupling = std::move(s.coupling);
    sol.dists = std::move(s.dists);
    sol.queues = std::move(s.queues);
    sol.service_prob = x.service;
    sol.idle_empty_prob = s.next.idle_empty;
    sol.iterations_used = iterations;
    sol.residual = residual;
    return sol;
  };

  for (int it = 1;; ++it) {
    detail::Sweep s = detail::sweep(sc, timing, arrivals, settings, x);
    const auto before = x.flat();
    const auto after = s.next.flat();
    double residual = 0.0;
    for (std::size_t i = 0; i < before.size(); ++i)
      residual = std::max(residual, std::abs(after[i] - before[i]));

    if (residual <= settings.tolerance) return package(std::move(s), it, residual);
    if (it >= settings.max_iterations) throw NonConvergence(residual, package(std::move(s), it, residual));

    if (residual < best_residual) {
      best_residual = residual;
      stalled = 0;
    } else if (++stalled >= detail::kStallWindow) {
      step = std::max(step * 0.5, detail::kMinStep);
      stalled = 0;
    }

    std::size_t k = 0;
    x.for_each([&](double& v) {
      v += step * (after[k] - v);
      ++k;
    });
    if (it == 1) step = 1.0 - settings.damping;
  }
}

/// Outcome of solving one scenario from both a quiet and a saturated start.
struct UniquenessReport {
  bool alternate_converged = false;
  bool multiple_fixed_points = false;
  double max_gap = 0.0;  // L-inf distance between the two coupling vectors
};

inline double coupling_distance(const CouplingState& a, const CouplingState& b) {
  double gap = std::max(std::abs(a.theta_hat_s - b.theta_hat_s), std::abs(a.theta_hat_o - b.theta_hat_o));
  for (auto ac : kAllAcs) {
    gap = std::max(gap, std::abs(a.theta[ac] - b.theta[ac]));
    gap = std::max(gap, std::abs(a.p_qe[ac] - b.p_qe[ac]));
    gap = std::max(gap, std::abs(a.p_s[ac] - b.p_s[ac]));
  }
  return gap;
}

/// Re-solves from the saturated start and compares with `sol`.
inline UniquenessReport check_uniqueness(const ConvergedSolution& sol, const SolverSettings& settings,
                                         double threshold = 1e-6) {
  UniquenessReport r;
  try {
    const auto alt = solve_fixed_point(sol.scenario, settings, Initialization::saturated);
    r.alternate_converged = true;
    r.max_gap = coupling_distance(sol.coupling, alt.coupling);
    r.multiple_fixed_points = r.max_gap > threshold;
  } catch (const NonConvergence&) {
  }
  return r;
}

}  // namespace edca
