// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "edca/access_category.hpp"
#include "edca/params.hpp"

namespace edca {

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

enum class StateKind : std::uint8_t {
  idle,
  aifs,          // A^j, j = 1..Omega: AIFS listening after leaving idle
  busy_wait,     // B_j, j = 1..theta_tx: deferring after a busy AIFS slot
  transmit,      // T_j, j = 1..theta_tx
  backoff_aifs,  // (b, A^j), j = 1..Omega-1: AIFS inside backoff stage b
  backoff_busy,  // (Delta^b, j), j = 1..theta_tx
  sense,         // (I, b): backoff counter slot
};

/// One state of an AC channel-access chain. `stage` is the backoff stage b for the
/// backoff kinds, `pos` the 1-based slot index j for the kinds that have one.
struct AcState {
  StateKind kind = StateKind::idle;
  int stage = 0;
  int pos = 0;

  static constexpr AcState idle() { return {StateKind::idle, 0, 0}; }
  static constexpr AcState aifs(int j) { return {StateKind::aifs, 0, j}; }
  static constexpr AcState busy_wait(int j) { return {StateKind::busy_wait, 0, j}; }
  static constexpr AcState transmit(int j) { return {StateKind::transmit, 0, j}; }
  static constexpr AcState backoff_aifs(int b, int j) { return {StateKind::backoff_aifs, b, j}; }
  static constexpr AcState backoff_busy(int b, int j) { return {StateKind::backoff_busy, b, j}; }
  static constexpr AcState sense(int b) { return {StateKind::sense, b, 0}; }

  friend constexpr auto operator<=>(const AcState&, const AcState&) = default;
};

/// Dimensions of one AC chain.
struct ChainShape {
  int omega = 1;
  int theta_tx = 1;
  int cw = 1;

  int num_states() const {
    return 1 + omega + 2 * theta_tx + cw * (omega - 1) + cw * theta_tx + cw;
  }

  // Flat index layout: idle | A^1..A^Omega | B | T | backoff AIFS | Delta | sense.
  int index_of(const AcState& s) const {
    const int base_a = 1;
    const int base_b = base_a + omega;
    const int base_t = base_b + theta_tx;
    const int base_ba = base_t + theta_tx;
    const int base_bb = base_ba + cw * (omega - 1);
    const int base_s = base_bb + cw * theta_tx;
    switch (s.kind) {
      case StateKind::idle: return 0;
      case StateKind::aifs: return base_a + s.pos - 1;
      case StateKind::busy_wait: return base_b + s.pos - 1;
      case StateKind::transmit: return base_t + s.pos - 1;
      case StateKind::backoff_aifs: return base_ba + s.stage * (omega - 1) + s.pos - 1;
      case StateKind::backoff_busy: return base_bb + s.stage * theta_tx + s.pos - 1;
      case StateKind::sense: return base_s + s.stage;
    }
    return -1;
  }

  bool contains(const AcState& s) const {
    switch (s.kind) {
      case StateKind::idle: return true;
      case StateKind::aifs: return s.pos >= 1 && s.pos <= omega;
      case StateKind::busy_wait:
      case StateKind::transmit: return s.pos >= 1 && s.pos <= theta_tx;
      case StateKind::backoff_aifs:
        return s.stage >= 0 && s.stage < cw && s.pos >= 1 && s.pos <= omega - 1;
      case StateKind::backoff_busy:
        return s.stage >= 0 && s.stage < cw && s.pos >= 1 && s.pos <= theta_tx;
      case StateKind::sense: return s.stage >= 0 && s.stage < cw;
    }
    return false;
  }

  /// First state of backoff stage b: its AIFS, or the sense slot when Omega = 1.
  AcState stage_entry(int b) const {
    return omega > 1 ? AcState::backoff_aifs(b, 1) : AcState::sense(b);
  }
};

inline ChainShape chain_shape(AcIndex ac, const TimingDerived& timing, const PerAc<int>& cw) {
  return {timing.omega[ac], timing.theta_tx, cw[ac]};
}

/// Deterministic enumeration in ChainShape::index_of order.
inline std::vector<AcState> enumerate_states(const ChainShape& shape) {
  std::vector<AcState> out;
  out.reserve(static_cast<std::size_t>(shape.num_states()));
  out.push_back(AcState::idle());
  for (int j = 1; j <= shape.omega; ++j) out.push_back(AcState::aifs(j));
  for (int j = 1; j <= shape.theta_tx; ++j) out.push_back(AcState::busy_wait(j));
  for (int j = 1; j <= shape.theta_tx; ++j) out.push_back(AcState::transmit(j));
  for (int b = 0; b < shape.cw; ++b)
    for (int j = 1; j <= shape.omega - 1; ++j) out.push_back(AcState::backoff_aifs(b, j));
  for (int b = 0; b < shape.cw; ++b)
    for (int j = 1; j <= shape.theta_tx; ++j) out.push_back(AcState::backoff_busy(b, j));
  for (int b = 0; b < shape.cw; ++b) out.push_back(AcState::sense(b));
  return out;
}

inline std::vector<AcState> enumerate_states(AcIndex ac, const TimingDerived& timing,
                                             const PerAc<int>& cw) {
  return enumerate_states(chain_shape(ac, timing, cw));
}

inline std::string to_string(const AcState& s) {
  switch (s.kind) {
    case StateKind::idle: return "Idle";
    case StateKind::aifs: return "A" + std::to_string(s.pos);
    case StateKind::busy_wait: return "B" + std::to_string(s.pos);
    case StateKind::transmit: return "T" + std::to_string(s.pos);
    case StateKind::backoff_aifs:
      return "(" + std::to_string(s.stage) + ",A" + std::to_string(s.pos) + ")";
    case StateKind::backoff_busy:
      return "(D" + std::to_string(s.stage) + "," + std::to_string(s.pos) + ")";
    case StateKind::sense: return "I" + std::to_string(s.stage);
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Coupling
// ---------------------------------------------------------------------------

/// Fixed-point variables exchanged between the queue, generator and AC chains.
struct CouplingState {
  PerAc<double> theta{};  // per-AC share of the sensed busy ratio
  double theta_hat_s = 0.0;
  double theta_hat_o = 0.0;
  PerAc<double> phi{};
  PerAc<double> p_arr{};
  PerAc<double> p_qe = PerAc<double>::filled(1.0);
  PerAc<double> p_s{};
};

inline void validate(const CouplingState& c) {
  auto prob = [](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " outside [0,1]");
  };
  prob(c.theta_hat_s, "theta_hat_s");
  prob(c.theta_hat_o, "theta_hat_o");
  double sum_theta = 0.0;
  for (auto ac : kAllAcs) {
    prob(c.theta[ac], "theta");
    prob(c.phi[ac], "phi");
    prob(c.p_arr[ac], "p_arr");
    prob(c.p_qe[ac], "p_qe");
    prob(c.p_s[ac], "p_s");
    sum_theta += c.theta[ac];
  }
  if (c.theta_hat_o + 1e-12 < c.theta_hat_s)
    throw std::invalid_argument("theta_hat_o must be >= theta_hat_s");
  if (sum_theta > c.theta_hat_s + 1e-9)
    throw std::invalid_argument("per-AC busy ratios exceed theta_hat_s");
}

/// Probability that AC i leaves idle in a slot: own queue active and every
/// higher-priority queue empty.
inline PerAc<double> coupling_probs(const PerAc<double>& p_arr, const PerAc<double>& p_qe) {
  PerAc<double> phi{};
  double higher_empty = 1.0;
  for (auto ac : kAllAcs) {
    phi[ac] = (1.0 - (1.0 - p_arr[ac]) * p_qe[ac]) * higher_empty;
    higher_empty *= p_qe[ac];
  }
  return phi;
}

/// Probability of idling with an empty own queue. AC_vo idles only with an empty queue;
/// a lower AC also idles while a higher-priority queue is backlogged, so its idle mass
/// is scaled by P(own queue empty | idle).
inline PerAc<double> idle_with_empty_queue(const PerAc<double>& pi_idle,
                                           const PerAc<double>& p_qe) {
  PerAc<double> out{};
  double higher_empty = 1.0;
  for (auto ac : kAllAcs) {
    if (ac == AcIndex::vo) {
      out[ac] = pi_idle[ac];
    } else {
      const double denom = 1.0 - (1.0 - p_qe[ac]) * higher_empty;
      out[ac] = denom > 0.0 ? pi_idle[ac] * p_qe[ac] / denom : 0.0;
    }
    higher_empty *= p_qe[ac];
  }
  return out;
}

/// Busy probability at backoff-AIFS slot p (1-based) of `ac`: only higher-priority ACs
/// whose own AIFS has already elapsed by slot p can start transmitting there.
inline std::vector<double> backoff_busy_profile(AcIndex ac, const TimingDerived& timing,
                                                const PerAc<double>& theta) {
  const int omega = timing.omega[ac];
  std::vector<double> h(static_cast<std::size_t>(std::max(0, omega - 1)), 0.0);
  for (int p = 1; p <= omega - 1; ++p) {
    double busy = 0.0;
    for (auto l : kAllAcs)
      if (higher_priority(l, ac) && timing.omega[l] <= p) busy += theta[l];
    h[static_cast<std::size_t>(p - 1)] = std::min(1.0, busy);
  }
  return h;
}

/// Everything one AC chain needs: its shape and the per-slot transition probabilities.
struct ChainParams {
  ChainShape shape;
  double phi = 0.0;
  double busy_on_arrival = 0.0;  // theta_hat_o, sensed at A^1
  double busy_sensed = 0.0;      // theta_hat_s, sensed at A^j (j >= 2) and sense slots
  std::vector<double> backoff_busy;  // size Omega-1
};

inline ChainParams chain_params(AcIndex ac, const CouplingState& c, const TimingDerived& timing,
                                const PerAc<int>& cw) {
  ChainParams p;
  p.shape = chain_shape(ac, timing, cw);
  p.phi = c.phi[ac];
  p.busy_on_arrival = c.theta_hat_o;
  p.busy_sensed = c.theta_hat_s;
  p.backoff_busy = backoff_busy_profile(ac, timing, c.theta);
  return p;
}

/// Probability that the backoff counter drawn uniformly from 0..cw selects stage b.
/// Counters 0 and 1 both map to stage 0.
inline double stage_weight(int b, int cw) {
  return (b == 0 ? 2.0 : 1.0) / static_cast<double>(cw + 1);
}

// ---------------------------------------------------------------------------
// Distributions
// ---------------------------------------------------------------------------

struct AcDistribution {
  ChainShape shape;
  std::vector<double> probs;

  double operator[](const AcState& s) const {
    return probs[static_cast<std::size_t>(shape.index_of(s))];
  }
  double idle() const { return probs.front(); }
  double transmit_start() const { return (*this)[AcState::transmit(1)]; }
  double transmit_total() const {
    double t = 0.0;
    for (int j = 1; j <= shape.theta_tx; ++j) t += (*this)[AcState::transmit(j)];
    return t;
  }
  /// Mass of the two states from which a transmission is initiated.
  double initiation_mass() const {
    return (*this)[AcState::aifs(shape.omega)] + (*this)[AcState::sense(0)];
  }
};

// ---------------------------------------------------------------------------
// Transition matrix and stationary oracle
// ---------------------------------------------------------------------------

struct Triplet {
  int row = 0;
  int col = 0;
  double prob = 0.0;
};

/// Row-stochastic matrix in sparse triplet form, rows sorted.
struct TransitionMatrix {
  int size = 0;
  std::vector<Triplet> entries;
};

class ChainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline TransitionMatrix build_transition_matrix(const ChainParams& p) {
  const ChainShape& sh = p.shape;
  const int n = sh.num_states();
  std::vector<std::map<int, double>> rows(static_cast<std::size_t>(n));
  auto add = [&](const AcState& from, const AcState& to, double prob) {
    if (prob == 0.0) return;
    rows[static_cast<std::size_t>(sh.index_of(from))][sh.index_of(to)] += prob;
  };
  const double o = p.busy_on_arrival, s = p.busy_sensed;
  const int om = sh.omega, th = sh.theta_tx, cw = sh.cw;

  add(AcState::idle(), AcState::idle(), 1.0 - p.phi);
  add(AcState::idle(), AcState::aifs(1), p.phi);

  // A^1 senses any ongoing transmission; the residual airtime K is uniform on 1..theta_tx.
  for (int k = 1; k <= th; ++k) add(AcState::aifs(1), AcState::busy_wait(k), o / th);
  add(AcState::aifs(1), om > 1 ? AcState::aifs(2) : AcState::transmit(1), 1.0 - o);
  for (int j = 2; j <= om; ++j) {
    add(AcState::aifs(j), AcState::busy_wait(1), s);
    add(AcState::aifs(j), j < om ? AcState::aifs(j + 1) : AcState::transmit(1), 1.0 - s);
  }
  for (int j = 1; j < th; ++j) add(AcState::busy_wait(j), AcState::busy_wait(j + 1), 1.0);
  for (int b = 0; b < cw; ++b)
    add(AcState::busy_wait(th), sh.stage_entry(b), stage_weight(b, cw));

  for (int j = 1; j < th; ++j) add(AcState::transmit(j), AcState::transmit(j + 1), 1.0);
  add(AcState::transmit(th), AcState::idle(), 1.0);

  for (int b = 0; b < cw; ++b) {
    for (int j = 1; j <= om - 1; ++j) {
      const double h = p.backoff_busy[static_cast<std::size_t>(j - 1)];
      add(AcState::backoff_aifs(b, j), AcState::backoff_busy(b, 1), h);
      add(AcState::backoff_aifs(b, j),
          j < om - 1 ? AcState::backoff_aifs(b, j + 1) : AcState::sense(b), 1.0 - h);
    }
    for (int j = 1; j < th; ++j)
      add(AcState::backoff_busy(b, j), AcState::backoff_busy(b, j + 1), 1.0);
    add(AcState::backoff_busy(b, th), sh.stage_entry(b), 1.0);

    add(AcState::sense(b), AcState::backoff_busy(b, 1), s);
    add(AcState::sense(b), b > 0 ? AcState::sense(b - 1) : AcState::transmit(1), 1.0 - s);
  }

  TransitionMatrix m;
  m.size = n;
  for (int r = 0; r < n; ++r) {
    double sum = 0.0;
    for (const auto& [c, v] : rows[static_cast<std::size_t>(r)]) {
      m.entries.push_back({r, c, v});
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw ChainError("row " + std::to_string(r) + " sums to " + std::to_string(sum));
  }
  return m;
}

inline TransitionMatrix build_transition_matrix(AcIndex ac, const CouplingState& c,
                                                const TimingDerived& timing,
                                                const PerAc<int>& cw) {
  return build_transition_matrix(chain_params(ac, c, timing, cw));
}

/// Sparse (row, col, prob) dump, one triplet per line.
inline void write_triplets(std::ostream& os, const TransitionMatrix& m) {
  char buf[96];
  for (const auto& t : m.entries) {
    std::snprintf(buf, sizeof buf, "%d %d %.17g\n", t.row, t.col, t.prob);
    os << buf;
  }
}

// ---------------------------------------------------------------------------
// Closed-form steady state
// ---------------------------------------------------------------------------

/// Stationary distribution in closed form. Let x = pi_idle and F = x * phi:
///   A^1 = F,  A^j = F (1-o)(1-s)^(j-2),  T_j = F,
///   B_j = F [j o / theta_tx + (1-o)(1 - (1-s)^(Omega-1))],  beta = B_theta_tx.
/// With stage weights q_b, tail sums Q_b, and R the probability of crossing a stage's
/// AIFS without a busy slot:
///   pi(I, b) = beta Q_b / (1-s)
///   a_b = beta [q_b (1-s) + s Q_b] / [(1-s) R]      (entry flow of stage b)
///   pi(b, A^j) = a_b prod_{p<j} (1 - h_p)
///   pi(Delta^b, j) = a_b (1 - R) + s pi(I, b)
/// and x follows from normalisation.
///
/// For AC_vo the printed form pi(b, A^j) = pi_B [1 + (C-b-1) s] / [C (1-s)] is the
/// special case q_b = 1/C, R = 1; AC_vi's printed (1 - theta_vo) denominator is R.
inline AcDistribution closed_form_steady_state(const ChainParams& p) {
  const ChainShape& sh = p.shape;
  const double o = p.busy_on_arrival, s = p.busy_sensed, phi = p.phi;
  const int om = sh.omega, th = sh.theta_tx, cw = sh.cw;

  AcDistribution d{sh, std::vector<double>(static_cast<std::size_t>(sh.num_states()), 0.0)};
  auto at = [&](const AcState& st) -> double& {
    return d.probs[static_cast<std::size_t>(sh.index_of(st))];
  };
  if (phi == 0.0) {
    at(AcState::idle()) = 1.0;
    return d;
  }
  if (!(s < 1.0)) throw ChainError("closed form undefined for theta_hat_s = 1");

  double stage_pass = 1.0;
  for (double h : p.backoff_busy) stage_pass *= (1.0 - h);
  if (stage_pass <= 0.0) throw ChainError("closed form undefined: backoff AIFS always busy");

  // Unnormalised masses with pi_idle = 1.
  at(AcState::idle()) = 1.0;
  const double f = phi;
  at(AcState::aifs(1)) = f;
  for (int j = 2; j <= om; ++j) at(AcState::aifs(j)) = f * (1.0 - o) * std::pow(1.0 - s, j - 2);
  const double sensed_busy = 1.0 - std::pow(1.0 - s, om - 1);
  for (int j = 1; j <= th; ++j)
    at(AcState::busy_wait(j)) = f * (j * o / th + (1.0 - o) * sensed_busy);
  for (int j = 1; j <= th; ++j) at(AcState::transmit(j)) = f;

  const double beta = at(AcState::busy_wait(th));
  double tail = 0.0;  // Q_b, accumulated from the top stage down
  for (int b = cw - 1; b >= 0; --b) {
    const double q = stage_weight(b, cw);
    tail += q;
    const double visits = beta * tail / (1.0 - s);
    const double entry = beta * (q * (1.0 - s) + s * tail) / ((1.0 - s) * stage_pass);
    at(AcState::sense(b)) = visits;
    double surv = 1.0;
    for (int j = 1; j <= om - 1; ++j) {
      at(AcState::backoff_aifs(b, j)) = entry * surv;
      surv *= 1.0 - p.backoff_busy[static_cast<std::size_t>(j - 1)];
    }
    const double delta = entry * (1.0 - stage_pass) + s * visits;
    for (int j = 1; j <= th; ++j) at(AcState::backoff_busy(b, j)) = delta;
  }

  double total = 0.0;
  for (double v : d.probs) total += v;
  for (double& v : d.probs) v /= total;
  return d;
}

inline AcDistribution closed_form_steady_state(AcIndex ac, const CouplingState& c,
                                               const TimingDerived& timing,
                                               const PerAc<int>& cw) {
  return closed_form_steady_state(chain_params(ac, c, timing, cw));
}

// ---------------------------------------------------------------------------
// Busy ratios
// ---------------------------------------------------------------------------

struct BusyRatios {
  double theta_hat_s = 0.0;
  double theta_hat_o = 0.0;
  PerAc<double> theta{};
};

/// Busy probabilities seen by one vehicle from its N-1 neighbours, and the split of
/// theta_hat_s over ACs in proportion to each AC's transmission-initiation mass.
inline BusyRatios busy_ratios(const PerAc<AcDistribution>& dists, int n_vehicles) {
  if (n_vehicles < 1) throw std::invalid_argument("N must be >= 1");
  double quiet_start = 1.0, quiet_any = 1.0, weight_sum = 0.0;
  PerAc<double> weight{};
  for (auto ac : kAllAcs) {
    quiet_start *= 1.0 - dists[ac].transmit_start();
    quiet_any *= 1.0 - dists[ac].transmit_total();
    weight[ac] = dists[ac].initiation_mass();
    weight_sum += weight[ac];
  }
  BusyRatios r;
  r.theta_hat_s = 1.0 - std::pow(quiet_start, n_vehicles - 1);
  r.theta_hat_o = 1.0 - std::pow(quiet_any, n_vehicles - 1);
  if (weight_sum > 0.0)
    for (auto ac : kAllAcs) r.theta[ac] = r.theta_hat_s * weight[ac] / weight_sum;
  return r;
}

}  // namespace edca
