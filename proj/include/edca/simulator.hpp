// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <ostream>
#include <queue>
#include <random>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "edca/ac_chain.hpp"
#include "edca/solver.hpp"
#include "edca/traffic.hpp"

namespace edca {

// ---------------------------------------------------------------------------
// Randomness
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream seed for one (base seed, N, replicate) triple.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t n, std::uint64_t replicate = 0) {
  return splitmix64(splitmix64(splitmix64(base) ^ n) ^ replicate);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0,1) with 53 random bits; identical on every platform.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * static_cast<double>(hi - lo + 1));
  }
  /// Number of trials up to and including the first success, p in (0,1].
  std::int64_t geometric(double p) {
    if (p >= 1.0) return 1;
    const double u = 1.0 - uniform();
    const double g = std::floor(std::log(u) / std::log1p(-p));
    if (!(g < 4.0e18)) return std::numeric_limits<std::int64_t>::max() / 4;
    return 1 + static_cast<std::int64_t>(g);
  }

 private:
  std::mt19937_64 gen_;
};

// ---------------------------------------------------------------------------
// Chain stepping shared by both simulators
// ---------------------------------------------------------------------------

/// What an AC observes on the channel in the current slot.
struct ChannelObservation {
  bool busy_any = false;       // some transmission is on air (checked at A^1)
  int residual_index = 1;      // K of the busy-wait entered from A^1
  bool busy_start = false;     // a transmission starts (checked at A^j>1 and sense slots)
  bool backoff_busy = false;   // busy during a backoff-stage AIFS slot
};

/// Backoff stage drawn from a counter uniform on 0..cw; counters 0 and 1 share stage 0.
inline int draw_stage(Rng& rng, int cw) { return std::max(0, rng.uniform_int(0, cw) - 1); }

/// Successor of a non-idle state.
inline AcState next_active_state(const ChainShape& sh, const AcState& s,
                                 const ChannelObservation& obs, Rng& rng) {
  const int om = sh.omega, th = sh.theta_tx;
  switch (s.kind) {
    case StateKind::idle: return AcState::aifs(1);
    case StateKind::aifs:
      if (s.pos == 1 && obs.busy_any) return AcState::busy_wait(obs.residual_index);
      if (s.pos > 1 && obs.busy_start) return AcState::busy_wait(1);
      return s.pos < om ? AcState::aifs(s.pos + 1) : AcState::transmit(1);
    case StateKind::busy_wait:
      return s.pos < th ? AcState::busy_wait(s.pos + 1) : sh.stage_entry(draw_stage(rng, sh.cw));
    case StateKind::transmit:
      return s.pos < th ? AcState::transmit(s.pos + 1) : AcState::idle();
    case StateKind::backoff_aifs:
      if (obs.backoff_busy) return AcState::backoff_busy(s.stage, 1);
      return s.pos < om - 1 ? AcState::backoff_aifs(s.stage, s.pos + 1) : AcState::sense(s.stage);
    case StateKind::backoff_busy:
      return s.pos < th ? AcState::backoff_busy(s.stage, s.pos + 1) : sh.stage_entry(s.stage);
    case StateKind::sense:
      if (obs.busy_start) return AcState::backoff_busy(s.stage, 1);
      return s.stage > 0 ? AcState::sense(s.stage - 1) : AcState::transmit(1);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Frozen-environment single chain
// ---------------------------------------------------------------------------

struct FrozenChainReport {
  ChainShape shape;
  std::vector<std::uint64_t> visits;                       // per state index
  std::vector<std::map<int, std::uint64_t>> transitions;  // from -> (to -> count)
  std::uint64_t slots = 0;

  std::vector<double> occupancy() const {
    std::vector<double> out(visits.size());
    for (std::size_t i = 0; i < visits.size(); ++i)
      out[i] = static_cast<double>(visits[i]) / static_cast<double>(slots);
    return out;
  }
};

/// Runs one AC chain whose environment is replaced by independent Bernoulli busy
/// indications with the probabilities held in `p`.
inline FrozenChainReport simulate_frozen_chain(const ChainParams& p, std::uint64_t slots,
                                               std::uint64_t seed,
                                               std::uint64_t warmup = 1000) {
  const ChainShape& sh = p.shape;
  const int n = sh.num_states();
  FrozenChainReport r;
  r.shape = sh;
  r.visits.assign(static_cast<std::size_t>(n), 0);
  r.transitions.resize(static_cast<std::size_t>(n));
  Rng rng(seed);
  AcState s = AcState::idle();
  for (std::uint64_t t = 0; t < warmup + slots; ++t) {
    AcState next;
    if (s.kind == StateKind::idle) {
      next = rng.bernoulli(p.phi) ? AcState::aifs(1) : AcState::idle();
    } else {
      ChannelObservation obs;
      switch (s.kind) {
        case StateKind::aifs:
          if (s.pos == 1) {
            obs.busy_any = rng.bernoulli(p.busy_on_arrival);
            if (obs.busy_any) obs.residual_index = rng.uniform_int(1, sh.theta_tx);
          } else {
            obs.busy_start = rng.bernoulli(p.busy_sensed);
          }
          break;
        case StateKind::backoff_aifs:
          obs.backoff_busy = rng.bernoulli(p.backoff_busy[static_cast<std::size_t>(s.pos - 1)]);
          break;
        case StateKind::sense: obs.busy_start = rng.bernoulli(p.busy_sensed); break;
        default: break;
      }
      next = next_active_state(sh, s, obs, rng);
    }
    if (t >= warmup) {
      const int from = sh.index_of(s);
      ++r.visits[static_cast<std::size_t>(from)];
      ++r.transitions[static_cast<std::size_t>(from)][sh.index_of(next)];
      ++r.slots;
    }
    s = next;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Network simulator
// ---------------------------------------------------------------------------

struct SimConfig {
  Scenario scenario;
  std::int64_t horizon_slots = 10'000'000;
  std::int64_t warmup_slots = 100'000;
  std::uint64_t seed = 1;
  bool randomize_cam_phase = true;
  std::ostream* trace = nullptr;  // per-slot (slot, vehicle, ac, state) of non-idle ACs
};

inline void validate(const SimConfig& cfg) {
  validate(cfg.scenario);
  if (cfg.horizon_slots < 1) throw std::invalid_argument("horizon_slots must be positive");
  if (cfg.warmup_slots < 0) throw std::invalid_argument("warmup_slots must be non-negative");
  if (cfg.horizon_slots <= cfg.warmup_slots)
    throw std::invalid_argument("horizon_slots must exceed warmup_slots");
}

struct SimReport {
  int n_vehicles = 0;
  std::int64_t measured_slots = 0;
  Seconds slot_time{};

  double p_col_tot = 0.0;
  double channel_utilization = 0.0;
  double theta_hat_s = 0.0;
  double theta_hat_o = 0.0;
  PerAc<double> theta{};
  PerAc<double> throughput{};  // bits/s
  double s_tot = 0.0;          // bits/s
  PerAc<Milliseconds> service_time{};
  PerAc<Milliseconds> delay{};
  PerAc<double> p_qe{};
  PerAc<double> queue_full{};
  PerAc<double> drop_prob{};  // drops per vehicle-slot

  // Whole-run packet counters, so generated == transmitted + dropped + queued.
  PerAc<std::uint64_t> generated{};
  PerAc<std::uint64_t> transmitted{};
  PerAc<std::uint64_t> dropped{};
  PerAc<std::uint64_t> queued{};  // waiting or held by the AC at the end

  // Measured-window initiation accounting.
  std::uint64_t initiation_slots = 0;
  std::uint64_t successful_initiations = 0;
  std::uint64_t collided_initiations = 0;
  std::uint64_t initiations = 0;

  PerAc<ChainShape> shapes{};
  PerAc<std::vector<std::uint64_t>> occupancy_counts{};  // vehicle-slots per state index
};

inline std::vector<double> empirical_state_occupancy(const SimReport& r, AcIndex ac) {
  const auto& counts = r.occupancy_counts[ac];
  std::vector<double> out(counts.size(), 0.0);
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  if (total <= 0.0) return out;
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = static_cast<double>(counts[i]) / total;
  return out;
}

namespace detail {

enum class EventKind : std::uint8_t { cam, mhd, burst_start, deposit };

struct Event {
  std::int64_t slot;
  int vehicle;
  AcIndex ac;
  EventKind kind;

  bool operator>(const Event& o) const {
    return std::tie(slot, vehicle, ac, kind) > std::tie(o.slot, o.vehicle, o.ac, o.kind);
  }
};

struct AcRuntime {
  AcState state = AcState::idle();
  std::deque<std::int64_t> waiting;  // arrival slots
  std::int64_t hol_arrival = 0;
  std::int64_t hol_pop = 0;
  bool active = false;
};

struct Vehicle {
  PerAc<AcRuntime> acs;
  std::int64_t cam_index = 0;
  double cam_phase = 0.0;
  bool on_check_list = false;
};

class Network {
 public:
  explicit Network(const SimConfig& cfg)
      : cfg_(cfg),
        sc_(cfg.scenario),
        timing_(derive_timing(sc_.edca)),
        rng_(cfg.seed),
        vehicles_(static_cast<std::size_t>(sc_.n_vehicles)) {
    const Seconds slot = timing_.slot_time;
    cam_period_slots_ = sc_.traffic.cam_period / slot;
    mhd_prob_ = poisson_slot_prob(sc_.traffic.mhd_rate_hz, slot);
    gen_[AcIndex::vo] = hpd_generator(sc_.traffic, slot);
    gen_[AcIndex::vi] = denm_generator(sc_.traffic, slot);
    for (auto ac : kAllAcs) {
      shapes_[ac] = chain_shape(ac, timing_, sc_.edca.cw);
      report_.shapes[ac] = shapes_[ac];
      report_.occupancy_counts[ac].assign(static_cast<std::size_t>(shapes_[ac].num_states()), 0);
    }
    report_.n_vehicles = sc_.n_vehicles;
    report_.slot_time = slot;
  }

  SimReport run() {
    seed_events();
    const std::int64_t horizon = cfg_.horizon_slots;
    std::int64_t t = 0;
    while (t < horizon) {
      process_arrivals(t);
      admit_from_idle(t);
      observe_and_step(t);
      ++t;
      if (active_.empty() && check_list_.empty()) {
        const std::int64_t next = events_.empty() ? horizon : std::min(events_.top().slot, horizon);
        if (next > t) {
          account_quiet(t, next);
          t = next;
        }
      }
    }
    finish();
    return std::move(report_);
  }

 private:
  using Handle = std::pair<int, AcIndex>;

  AcRuntime& rt(const Handle& h) { return vehicles_[static_cast<std::size_t>(h.first)].acs[h.second]; }
  bool measuring(std::int64_t t) const { return t >= cfg_.warmup_slots; }

  void schedule_cam(int v) {
    if (!std::isfinite(cam_period_slots_)) return;
    auto& veh = vehicles_[static_cast<std::size_t>(v)];
    const double at = veh.cam_phase + static_cast<double>(veh.cam_index) * cam_period_slots_;
    ++veh.cam_index;
    events_.push({static_cast<std::int64_t>(std::floor(at)), v, AcIndex::be, EventKind::cam});
  }

  void schedule_burst(int v, AcIndex ac, std::int64_t idle_from) {
    const auto& g = gen_[ac];
    if (g.trigger_prob <= 0.0) return;
    // The generator idles from `idle_from` and triggers on its first successful slot;
    // burst state 1 is the slot after.
    events_.push({idle_from + rng_.geometric(g.trigger_prob), v, ac, EventKind::burst_start});
  }

  void seed_events() {
    for (int v = 0; v < sc_.n_vehicles; ++v) {
      auto& veh = vehicles_[static_cast<std::size_t>(v)];
      veh.cam_phase = cfg_.randomize_cam_phase && std::isfinite(cam_period_slots_)
                          ? rng_.uniform() * cam_period_slots_
                          : 0.0;
      schedule_cam(v);
      if (mhd_prob_ > 0.0)
        events_.push({rng_.geometric(mhd_prob_) - 1, v, AcIndex::bk, EventKind::mhd});
      schedule_burst(v, AcIndex::vo, 0);
      schedule_burst(v, AcIndex::vi, 0);
    }
  }

  void arrive(int v, AcIndex ac, std::int64_t t) {
    auto& a = vehicles_[static_cast<std::size_t>(v)].acs[ac];
    ++report_.generated[ac];
    if (static_cast<int>(a.waiting.size()) >= sc_.queue_depth) {
      ++report_.dropped[ac];
      if (measuring(t)) ++drops_window_[ac];
      return;
    }
    if (a.waiting.empty()) ++nonempty_[ac];
    a.waiting.push_back(t);
    add_to_check_list(v);
  }

  void add_to_check_list(int v) {
    auto& veh = vehicles_[static_cast<std::size_t>(v)];
    if (!veh.on_check_list) {
      veh.on_check_list = true;
      check_list_.push_back(v);
    }
  }

  void process_arrivals(std::int64_t t) {
    while (!events_.empty() && events_.top().slot <= t) {
      const Event e = events_.top();
      events_.pop();
      switch (e.kind) {
        case EventKind::cam:
          arrive(e.vehicle, e.ac, t);
          schedule_cam(e.vehicle);
          break;
        case EventKind::mhd:
          arrive(e.vehicle, e.ac, t);
          events_.push({t + rng_.geometric(mhd_prob_), e.vehicle, e.ac, EventKind::mhd});
          break;
        case EventKind::burst_start: {
          const auto& g = gen_[e.ac];
          for (int r = 0; r < g.repetitions; ++r)
            events_.push({t + static_cast<std::int64_t>(r) * g.interval_slots, e.vehicle, e.ac,
                          EventKind::deposit});
          schedule_burst(e.vehicle, e.ac, t + g.burst_length());
          break;
        }
        case EventKind::deposit: arrive(e.vehicle, e.ac, t); break;
      }
    }
  }

  // An idle AC takes its head-of-line packet when every higher-priority queue is empty.
  void admit_from_idle(std::int64_t t) {
    std::size_t keep = 0;
    for (std::size_t i = 0; i < check_list_.size(); ++i) {
      const int v = check_list_[i];
      auto& veh = vehicles_[static_cast<std::size_t>(v)];
      PerAc<bool> had_backlog{};
      for (auto ac : kAllAcs) had_backlog[ac] = !veh.acs[ac].waiting.empty();
      bool higher_backlog = false;
      bool still_blocked = false;
      for (auto ac : kAllAcs) {
        auto& a = veh.acs[ac];
        if (!a.active && had_backlog[ac]) {
          if (higher_backlog) {
            still_blocked = true;
          } else {
            a.hol_arrival = a.waiting.front();
            a.hol_pop = t;
            a.waiting.pop_front();
            if (a.waiting.empty()) --nonempty_[ac];
            a.active = true;
            pending_start_.push_back({v, ac});
          }
        }
        higher_backlog = higher_backlog || had_backlog[ac];
      }
      if (still_blocked)
        check_list_[keep++] = v;
      else
        veh.on_check_list = false;
    }
    check_list_.resize(keep);
  }

  void observe_and_step(std::int64_t t) {
    const int n = sc_.n_vehicles;
    // Vehicle-level channel state.
    tx_vehicles_.clear();
    start_vehicles_.clear();
    PerAc<int> starts_per_ac{};
    // Smallest transmit index overall, and smallest among the other vehicles.
    int min_k = std::numeric_limits<int>::max(), min_k_vehicle = -1, second_k = min_k;
    for (const auto& h : active_) {
      const AcState& s = rt(h).state;
      if (s.kind != StateKind::transmit) continue;
      push_unique(tx_vehicles_, h.first);
      if (s.pos == 1) {
        push_unique(start_vehicles_, h.first);
        ++starts_per_ac[h.second];
      }
      if (h.first == min_k_vehicle) {
        min_k = std::min(min_k, s.pos);
      } else if (s.pos < min_k) {
        second_k = min_k;
        min_k = s.pos;
        min_k_vehicle = h.first;
      } else {
        second_k = std::min(second_k, s.pos);
      }
    }
    const int n_tx = static_cast<int>(tx_vehicles_.size());
    const int n_start = static_cast<int>(start_vehicles_.size());

    if (measuring(t)) {
      ++report_.measured_slots;
      auto others = [&](int count) {
        return count >= 2 ? 1.0 : count == 1 ? static_cast<double>(n - 1) / n : 0.0;
      };
      sum_theta_o_ += others(n_tx);
      sum_theta_s_ += others(n_start);
      for (auto ac : kAllAcs) sum_theta_[ac] += others(starts_per_ac[ac]);
      if (n_tx >= 1) ++busy_slots_;
      if (n_start >= 2) ++collision_slots_;
      if (n_start >= 1) {
        ++report_.initiation_slots;
        if (n_start == 1) ++report_.successful_initiations;
        else report_.collided_initiations += static_cast<std::uint64_t>(n_start);
        report_.initiations += static_cast<std::uint64_t>(n_start);
      }
      if (n_tx == 1) {
        ++single_tx_slots_;
        for (const auto& h : active_)
          if (h.first == tx_vehicles_[0] && rt(h).state.kind == StateKind::transmit)
            ++single_tx_slots_ac_[h.second];
      }
      for (auto ac : kAllAcs) nonempty_sum_[ac] += nonempty_[ac];
      for (const auto& h : active_) {
        auto& a = rt(h);
        ++report_.occupancy_counts[h.second][static_cast<std::size_t>(shapes_[h.second].index_of(a.state))];
        if (static_cast<int>(a.waiting.size()) >= sc_.queue_depth) ++full_sum_[h.second];
      }
      for (int v : check_list_)
        for (auto ac : kAllAcs) {
          const auto& a = vehicles_[static_cast<std::size_t>(v)].acs[ac];
          if (!a.active && static_cast<int>(a.waiting.size()) >= sc_.queue_depth) ++full_sum_[ac];
        }
    }
    if (cfg_.trace) write_trace(t);

    // Advance every chain that was non-idle in this slot.
    std::size_t keep = 0;
    for (std::size_t i = 0; i < active_.size(); ++i) {
      const Handle h = active_[i];
      auto& a = rt(h);
      const bool self_tx = contains(tx_vehicles_, h.first);
      const bool self_start = contains(start_vehicles_, h.first);
      ChannelObservation obs;
      obs.busy_any = n_tx - (self_tx ? 1 : 0) >= 1;
      obs.busy_start = n_start - (self_start ? 1 : 0) >= 1;
      obs.backoff_busy = obs.busy_start;
      if (obs.busy_any) obs.residual_index = h.first == min_k_vehicle ? second_k : min_k;
      const AcState next = next_active_state(shapes_[h.second], a.state, obs, rng_);
      if (a.state.kind == StateKind::transmit && a.state.pos == timing_.theta_tx)
        complete(h, t);
      a.state = next;
      if (next.kind == StateKind::idle) {
        a.active = false;
        if (!a.waiting.empty()) add_to_check_list(h.first);
      } else {
        active_[keep++] = h;
      }
    }
    active_.resize(keep);
    // Chains admitted this slot were idle in it and enter A^1 in the next one.
    for (const auto& h : pending_start_) {
      rt(h).state = AcState::aifs(1);
      active_.push_back(h);
    }
    pending_start_.clear();
  }

  void complete(const Handle& h, std::int64_t t) {
    auto& a = rt(h);
    ++report_.transmitted[h.second];
    if (measuring(t)) {
      ++completed_window_[h.second];
      service_sum_[h.second] += static_cast<double>(t - a.hol_pop + 1);
      delay_sum_[h.second] += static_cast<double>(t - a.hol_arrival + 1);
    }
  }

  void account_quiet(std::int64_t from, std::int64_t to) {
    const std::int64_t lo = std::max(from, cfg_.warmup_slots);
    if (to <= lo) return;
    const auto len = static_cast<std::uint64_t>(to - lo);
    report_.measured_slots += static_cast<std::int64_t>(len);
    for (auto ac : kAllAcs) nonempty_sum_[ac] += static_cast<double>(nonempty_[ac]) * static_cast<double>(len);
  }

  void finish() {
    auto& r = report_;
    const double slots = static_cast<double>(r.measured_slots);
    const double n = sc_.n_vehicles;
    const double vs = slots * n;
    const double slot_s = timing_.slot_time.count();
    const double bw = sc_.edca.cch_rate_bps;
    r.p_col_tot = static_cast<double>(collision_slots_) / slots;
    r.channel_utilization = static_cast<double>(busy_slots_) / slots;
    r.theta_hat_o = sum_theta_o_ / slots;
    r.theta_hat_s = sum_theta_s_ / slots;
    r.s_tot = bw * static_cast<double>(single_tx_slots_) / slots;
    for (auto ac : kAllAcs) {
      r.theta[ac] = sum_theta_[ac] / slots;
      r.throughput[ac] = bw * static_cast<double>(single_tx_slots_ac_[ac]) / slots;
      r.p_qe[ac] = 1.0 - nonempty_sum_[ac] / vs;
      r.queue_full[ac] = static_cast<double>(full_sum_[ac]) / vs;
      r.drop_prob[ac] = static_cast<double>(drops_window_[ac]) / vs;
      const double done = static_cast<double>(completed_window_[ac]);
      r.service_time[ac] = Seconds{done > 0 ? service_sum_[ac] / done * slot_s : 0.0};
      r.delay[ac] = Seconds{done > 0 ? delay_sum_[ac] / done * slot_s : 0.0};

      std::uint64_t non_idle = 0;
      auto& occ = r.occupancy_counts[ac];
      for (std::size_t i = 1; i < occ.size(); ++i) non_idle += occ[i];
      occ[0] = static_cast<std::uint64_t>(vs) - non_idle;
    }
    for (const auto& veh : vehicles_)
      for (auto ac : kAllAcs) {
        r.queued[ac] += veh.acs[ac].waiting.size();
        if (veh.acs[ac].active) ++r.queued[ac];
      }
    for (const auto& h : pending_start_) ++r.queued[h.second];
  }

  void write_trace(std::int64_t t) {
    for (const auto& h : active_)
      *cfg_.trace << t << ',' << h.first << ',' << to_string(h.second) << ",\""
                  << to_string(rt(h).state) << "\"\n";
  }

  static void push_unique(std::vector<int>& xs, int v) {
    if (std::find(xs.begin(), xs.end(), v) == xs.end()) xs.push_back(v);
  }
  static bool contains(const std::vector<int>& xs, int v) {
    return std::find(xs.begin(), xs.end(), v) != xs.end();
  }

  SimConfig cfg_;
  Scenario sc_;
  TimingDerived timing_;
  Rng rng_;
  std::vector<Vehicle> vehicles_;
  PerAc<ChainShape> shapes_{};
  PerAc<RepetitionGenerator> gen_{};
  double cam_period_slots_ = 0.0;
  double mhd_prob_ = 0.0;

  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  std::vector<Handle> active_;
  std::vector<Handle> pending_start_;
  std::vector<int> check_list_;
  std::vector<int> tx_vehicles_, start_vehicles_;

  SimReport report_;
  PerAc<std::int64_t> nonempty_{};
  PerAc<double> nonempty_sum_{};
  PerAc<std::uint64_t> full_sum_{};
  PerAc<std::uint64_t> drops_window_{};
  PerAc<std::uint64_t> completed_window_{};
  PerAc<double> service_sum_{};
  PerAc<double> delay_sum_{};
  PerAc<double> sum_theta_{};
  PerAc<std::uint64_t> single_tx_slots_ac_{};
  double sum_theta_o_ = 0.0, sum_theta_s_ = 0.0;
  std::uint64_t busy_slots_ = 0, collision_slots_ = 0, single_tx_slots_ = 0;
};

}  // namespace detail

/// Slot-synchronous simulation of N mutually audible vehicles.
inline SimReport run_simulation(const SimConfig& cfg) {
  validate(cfg);
  return detail::Network(cfg).run();
}

}  // namespace edca
