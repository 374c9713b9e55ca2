// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "edca/ac_chain.hpp"

namespace edca {

/// max_j |(pi P)_j - pi_j|
inline double stationary_residual(const TransitionMatrix& m, const std::vector<double>& pi) {
  std::vector<double> next(pi.size(), 0.0);
  for (const auto& t : m.entries)
    next[static_cast<std::size_t>(t.col)] += pi[static_cast<std::size_t>(t.row)] * t.prob;
  double r = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) r = std::max(r, std::abs(next[i] - pi[i]));
  return r;
}

namespace detail {

// Lazy power iteration on (P + I) / 2, which shares P's stationary law and is aperiodic.
inline std::vector<double> lazy_power_iteration(const TransitionMatrix& m, double tol,
                                                int max_iter) {
  const auto n = static_cast<std::size_t>(m.size);
  std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n);
  for (int it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) next[i] = 0.5 * pi[i];
    for (const auto& t : m.entries)
      next[static_cast<std::size_t>(t.col)] += 0.5 * pi[static_cast<std::size_t>(t.row)] * t.prob;
    double sum = 0.0;
    for (double v : next) sum += v;
    for (double& v : next) v /= sum;
    pi.swap(next);
    if (it % 64 == 63 && stationary_residual(m, pi) <= tol) return pi;
  }
  throw ChainError("power iteration did not reach the stationary residual bound");
}

}  // namespace detail

/// Solves pi P = pi, sum(pi) = 1 by a dense LU solve, falling back to power iteration
/// when the direct solution misses the residual bound. Chains with a single closed class
/// (e.g. phi = 0, where every state drains into an absorbing Idle) have a unique solution
/// and come out as a point mass; chains with several closed classes are rejected.
inline std::vector<double> stationary_oracle(const TransitionMatrix& m, double tol = 1e-12) {
  const int n = m.size;
  if (n <= 0) throw ChainError("empty transition matrix");

  // (P^T - I) pi = 0 with the last balance equation replaced by sum(pi) = 1.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : m.entries) a(t.col, t.row) += t.prob;
  a.diagonal().array() -= 1.0;
  a.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::VectorXd x = lu.solve(rhs);
  if (!x.allFinite() || lu.rcond() < 1e-14) throw ChainError("chain is reducible: stationary law is not unique");

  std::vector<double> pi(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pi[static_cast<std::size_t>(i)] = std::max(0.0, x(i));
  double sum = 0.0;
  for (double v : pi) sum += v;
  for (double& v : pi) v /= sum;
  if (stationary_residual(m, pi) <= tol) return pi;
  return detail::lazy_power_iteration(m, tol, 2'000'000);
}

inline AcDistribution stationary_oracle(const ChainParams& p) {
  return {p.shape, stationary_oracle(build_transition_matrix(p))};
}

}  // namespace edca
