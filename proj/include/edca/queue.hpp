// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace edca {

/// Occupancy distribution of a finite device queue over states 0..m.
struct QueueDistribution {
  std::vector<double> pi;

  int m() const { return static_cast<int>(pi.size()) - 1; }
};

namespace detail {
inline void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " outside [0,1]");
}
}  // namespace detail

/// Stationary law of the birth-death queue with per-slot up-probability p_arr(1-p_s)
/// and down-probability p_s(1-p_arr). Arrivals to a full queue are lost.
inline QueueDistribution queue_steady_state(double p_arr, double p_s, int m) {
  detail::require_probability(p_arr, "p_arr");
  detail::require_probability(p_s, "p_s");
  if (m < 1) throw std::invalid_argument("queue depth m must be >= 1");

  const auto n = static_cast<std::size_t>(m) + 1;
  QueueDistribution q{std::vector<double>(n, 0.0)};
  const double up = p_arr * (1.0 - p_s);
  const double down = p_s * (1.0 - p_arr);
  if (up == 0.0) {
    q.pi.front() = 1.0;
    return q;
  }
  if (down == 0.0) {
    q.pi.back() = 1.0;
    return q;
  }
  // Geometric in the ratio; build from whichever end keeps terms <= 1.
  const double ratio = up / down;
  if (ratio <= 1.0) {
    double term = 1.0;
    for (std::size_t j = 0; j < n; ++j, term *= ratio) q.pi[j] = term;
  } else {
    const double inv = 1.0 / ratio;
    double term = 1.0;
    for (std::size_t j = n; j-- > 0; term *= inv) q.pi[j] = term;
  }
  const double total = std::accumulate(q.pi.begin(), q.pi.end(), 0.0);
  for (auto& p : q.pi) p /= total;
  return q;
}

inline double queue_empty_prob(const QueueDistribution& q) { return q.pi.front(); }

inline double queue_full_prob(const QueueDistribution& q) { return q.pi.back(); }

/// Per-slot probability that an arrival finds the queue full.
inline double drop_probability(double p_arr, const QueueDistribution& q) {
  return p_arr * q.pi.back();
}

/// sum_j (j+1) pi_j: expected number of service times a tagged arrival waits through.
inline double occupancy_weight(const QueueDistribution& q) {
  double s = 0.0;
  for (std::size_t j = 0; j < q.pi.size(); ++j) s += static_cast<double>(j + 1) * q.pi[j];
  return s;
}

}  // namespace edca
