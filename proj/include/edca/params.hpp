// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "edca/access_category.hpp"

namespace edca {

using Seconds = std::chrono::duration<double>;
using Microseconds = std::chrono::duration<double, std::micro>;
using Milliseconds = std::chrono::duration<double, std::milli>;

/// Standard-level MAC configuration of the control channel.
struct EdcaConfig {
  Seconds slot_time = Microseconds{13.0};
  Seconds sifs = Microseconds{32.0};
  PerAc<int> aifsn{{2, 3, 6, 9}};
  PerAc<int> cw{{4, 8, 16, 16}};
  int payload_bits = 134 * 8;
  double cch_rate_bps = 6.0e6;
  Seconds phy_overhead = Seconds{0.0};
};

/// Slot-level constants derived from an EdcaConfig.
struct TimingDerived {
  PerAc<int> omega{};  // AIFS length in slots
  int theta_tx = 1;    // transmission length in slots
  Seconds slot_time = Microseconds{13.0};
};

namespace detail {

// ceil() that tolerates ratios such as 39e-6 / 13e-6 landing a hair above an integer.
inline int ceil_ratio(double x) {
  const double snapped = std::round(x);
  if (std::abs(x - snapped) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<int>(snapped);
  return static_cast<int>(std::ceil(x));
}

}  // namespace detail

inline void validate(const EdcaConfig& cfg) {
  if (!(cfg.slot_time.count() > 0.0)) throw std::invalid_argument("slot_time must be positive");
  if (!(cfg.sifs.count() >= 0.0)) throw std::invalid_argument("sifs must be non-negative");
  if (!(cfg.cch_rate_bps > 0.0)) throw std::invalid_argument("cch_rate must be positive");
  if (cfg.payload_bits <= 0) throw std::invalid_argument("payload_bits must be positive");
  if (!(cfg.phy_overhead.count() >= 0.0))
    throw std::invalid_argument("phy_overhead must be non-negative");
  for (auto ac : kAllAcs) {
    if (cfg.aifsn[ac] < 1)
      throw std::invalid_argument("aifsn[" + std::string(to_string(ac)) + "] must be >= 1");
    if (cfg.cw[ac] < 1)
      throw std::invalid_argument("cw[" + std::string(to_string(ac)) + "] must be >= 1");
  }
  for (std::size_t i = 1; i < kNumAcs; ++i) {
    const auto hi = kAllAcs[i - 1], lo = kAllAcs[i];
    if (cfg.aifsn[hi] >= cfg.aifsn[lo])
      throw std::invalid_argument("aifsn must strictly increase from vo to bk");
    if (cfg.cw[hi] > cfg.cw[lo])
      throw std::invalid_argument("cw must be non-decreasing from vo to bk");
  }
}

/// Omega_i = AIFSN_i + ceil(SIFS / slot); theta_tx = ceil((payload / rate + overhead) / slot).
inline TimingDerived derive_timing(const EdcaConfig& cfg) {
  validate(cfg);
  const double slot = cfg.slot_time.count();
  const int sifs_slots = detail::ceil_ratio(cfg.sifs.count() / slot);

  TimingDerived t;
  t.slot_time = cfg.slot_time;
  for (auto ac : kAllAcs) t.omega[ac] = cfg.aifsn[ac] + sifs_slots;

  const double airtime = cfg.payload_bits / cfg.cch_rate_bps + cfg.phy_overhead.count();
  t.theta_tx = std::max(1, detail::ceil_ratio(airtime / slot));
  return t;
}

}  // namespace edca
