// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstring>
#include <limits>

#include "edca/solver.hpp"

namespace edca {
namespace {

Scenario scenario(int n) {
  Scenario sc;
  sc.n_vehicles = n;
  return sc;
}

double coupling_gap(const ConvergedSolution& a, const ConvergedSolution& b) {
  return coupling_distance(a.coupling, b.coupling);
}

TEST(Solver, ZeroTrafficIsImmediate) {
  Scenario sc = scenario(20);
  sc.traffic.event_rate_hz = 0.0;
  sc.traffic.mhd_rate_hz = 0.0;
  sc.traffic.cam_period = Seconds{std::numeric_limits<double>::infinity()};
  const auto sol = solve_fixed_point(sc, SolverSettings{});
  EXPECT_LE(sol.iterations_used, 2);
  for (auto ac : kAllAcs) {
    EXPECT_EQ(sol.dists[ac].idle(), 1.0);
    EXPECT_EQ(sol.coupling.theta[ac], 0.0);
  }
  EXPECT_EQ(sol.coupling.theta_hat_s, 0.0);
  EXPECT_EQ(sol.coupling.theta_hat_o, 0.0);
}

TEST(Solver, SingleVehicleSeesQuietChannel) {
  const auto sol = solve_fixed_point(scenario(1), SolverSettings{});
  EXPECT_EQ(sol.coupling.theta_hat_s, 0.0);
  EXPECT_EQ(sol.coupling.theta_hat_o, 0.0);
  for (auto ac : kAllAcs) {
    EXPECT_LT(sol.coupling.p_qe[ac], 1.0);
    EXPECT_GT(sol.queues[ac].pi[1], 0.0);
  }
}

TEST(Solver, ResidualWithinTolerance) {
  SolverSettings st;
  for (int n : {10, 50, 100, 200, 300}) {
    const auto sol = solve_fixed_point(scenario(n), st);
    EXPECT_LE(sol.residual, st.tolerance) << n;
    EXPECT_GE(sol.iterations_used, 1);
    for (auto ac : kAllAcs) {
      double sum = 0.0;
      for (double v : sol.dists[ac].probs) {
        EXPECT_GE(v, 0.0);
        sum += v;
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
  }
}

TEST(Solver, Deterministic) {
  const auto a = solve_fixed_point(scenario(80), SolverSettings{});
  const auto b = solve_fixed_point(scenario(80), SolverSettings{});
  EXPECT_EQ(a.iterations_used, b.iterations_used);
  EXPECT_EQ(a.residual, b.residual);
  for (auto ac : kAllAcs) {
    ASSERT_EQ(a.dists[ac].probs.size(), b.dists[ac].probs.size());
    EXPECT_EQ(0, std::memcmp(a.dists[ac].probs.data(), b.dists[ac].probs.data(),
                             a.dists[ac].probs.size() * sizeof(double)));
    EXPECT_EQ(a.queues[ac].pi, b.queues[ac].pi);
  }
  EXPECT_EQ(a.coupling.theta_hat_o, b.coupling.theta_hat_o);
}

TEST(Solver, SelfConsistent) {
  SolverSettings st;
  for (int n : {10, 60, 250}) {
    const auto sol = solve_fixed_point(scenario(n), st);
    // One undamped sweep from the solution must return it.
    detail::Iterate x;
    x.p_qe = sol.coupling.p_qe;
    x.theta = sol.coupling.theta;
    x.p_s = sol.coupling.p_s;
    x.service = sol.service_prob;
    x.idle_empty = sol.idle_empty_prob;
    x.theta_hat_s = sol.coupling.theta_hat_s;
    x.theta_hat_o = sol.coupling.theta_hat_o;
    const auto s = detail::sweep(sol.scenario, sol.timing, sol.arrivals, st, x);
    const auto before = x.flat(), after = s.next.flat();
    for (std::size_t i = 0; i < before.size(); ++i) EXPECT_NEAR(after[i], before[i], st.tolerance) << n;
  }
}

TEST(Solver, OracleRouteAgrees) {
  SolverSettings fast, slow;
  slow.use_closed_form = false;
  for (int n : {10, 100}) {
    const auto a = solve_fixed_point(scenario(n), fast);
    const auto b = solve_fixed_point(scenario(n), slow);
    EXPECT_LE(coupling_gap(a, b), 1e-6) << n;
  }
}

TEST(Solver, NonConvergenceCarriesIterate) {
  SolverSettings st;
  st.max_iterations = 3;
  try {
    solve_fixed_point(scenario(100), st);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& e) {
    EXPECT_GT(e.residual(), st.tolerance);
    EXPECT_EQ(e.last_iterate().iterations_used, 3);
    EXPECT_EQ(e.last_iterate().scenario.n_vehicles, 100);
  }
}

TEST(Solver, InvalidScenario) {
  EXPECT_THROW(solve_fixed_point(scenario(0), SolverSettings{}), InvalidScenario);
  Scenario sc = scenario(5);
  sc.queue_depth = 0;
  EXPECT_THROW(solve_fixed_point(sc, SolverSettings{}), InvalidScenario);
  SolverSettings st;
  st.damping = 1.0;
  EXPECT_THROW(solve_fixed_point(scenario(5), st), std::invalid_argument);
}

TEST(Solver, TransmitOccupancyCouplingConverges) {
  SolverSettings st;
  st.queue_coupling = QueueCoupling::transmit_occupancy;
  for (int n : {10, 100, 300}) {
    const auto sol = solve_fixed_point(scenario(n), st);
    EXPECT_LE(sol.residual, st.tolerance);
  }
}

TEST(Solver, BusyRatiosGrowWithN) {
  double prev = 0.0;
  for (int n = 10; n <= 300; n += 10) {
    const auto sol = solve_fixed_point(scenario(n), SolverSettings{});
    EXPECT_GE(sol.coupling.theta_hat_o, prev - 1e-12) << n;
    EXPECT_GE(sol.coupling.theta_hat_o, sol.coupling.theta_hat_s);
    prev = sol.coupling.theta_hat_o;
  }
}

TEST(Solver, UniquenessDiagnostic) {
  SolverSettings st;
  const auto light = solve_fixed_point(scenario(10), st);
  const auto u = check_uniqueness(light, st);
  EXPECT_TRUE(u.alternate_converged);
  EXPECT_FALSE(u.multiple_fixed_points);
  EXPECT_LT(u.max_gap, 1e-6);

  // Between the light-load and saturated regimes the iteration has two attractors.
  const auto mid = solve_fixed_point(scenario(50), st);
  const auto v = check_uniqueness(mid, st);
  EXPECT_TRUE(v.alternate_converged);
  EXPECT_TRUE(v.multiple_fixed_points);
}

}  // namespace
}  // namespace edca
