#include <cmath>
#include <vector>

#include "doctest.h"
#include "gridvolt/bulk.hpp"
#include "gridvolt/presets.hpp"

using namespace gridvolt;

TEST_CASE("controlled bulk settles at sum_p / (N gamma)") {
  BulkParams p;
  p.alpha = 0.2;
  p.gamma = 1.0;
  p.n = 2;
  p.sum_p = 1.0;
  const auto late = analytic_bulk_constant_voltage(p, 500.0);
  CHECK(late.theta_bar == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(late.omega_bar) < 1e-9);
  // Initial conditions are honoured exactly.
  const auto start = analytic_bulk_constant_voltage(p, 0.0);
  CHECK(start.theta_bar == doctest::Approx(p.theta_bar_0).epsilon(1e-14));
  CHECK(start.omega_bar == doctest::Approx(p.omega_bar_0).epsilon(1e-14));
}

TEST_CASE("uncontrolled bulk drifts with omega_bar -> sum_p / (N alpha)") {
  BulkParams p;
  p.alpha = 0.2;
  p.gamma = 0.0;
  p.n = 2;
  p.sum_p = 1.0;
  const auto late = analytic_bulk_constant_voltage(p, 200.0);
  CHECK(late.omega_bar == doctest::Approx(2.5).epsilon(1e-9));
  const auto later = analytic_bulk_constant_voltage(p, 210.0);
  CHECK(later.theta_bar - late.theta_bar == doctest::Approx(25.0).epsilon(1e-8));
}

TEST_CASE("critically damped branch is continuous in gamma") {
  BulkParams p;
  p.alpha = 0.2;
  p.n = 2;
  p.sum_p = 1.0;
  p.omega_bar_0 = 0.3;
  // alpha^2 = 4 gamma at gamma = 0.01: repeated root r = -0.1.
  p.gamma = 0.01;
  const auto critical = analytic_bulk_constant_voltage(p, 7.0);
  p.gamma = 0.01 + 1e-9;  // just outside the critical dead zone: underdamped
  const auto above = analytic_bulk_constant_voltage(p, 7.0);
  p.gamma = 0.01 - 1e-9;  // overdamped
  const auto below = analytic_bulk_constant_voltage(p, 7.0);
  CHECK(std::abs(critical.theta_bar - above.theta_bar) < 1e-6);
  CHECK(std::abs(critical.theta_bar - below.theta_bar) < 1e-6);
  CHECK(std::isfinite(critical.omega_bar));
}

TEST_CASE("closed form solves the mean ODE (finite-difference residual)") {
  BulkParams p;
  p.alpha = 0.3;
  p.gamma = 1.7;
  p.n = 4;
  p.sum_p = -0.8;
  p.theta_bar_0 = 0.2;
  p.omega_bar_0 = -0.1;
  const double h = 1e-5;
  for (double t : {0.5, 3.0, 12.0}) {
    const auto mid = analytic_bulk_constant_voltage(p, t);
    const auto plus = analytic_bulk_constant_voltage(p, t + h);
    const auto minus = analytic_bulk_constant_voltage(p, t - h);
    const double theta_dot = (plus.theta_bar - minus.theta_bar) / (2.0 * h);
    const double omega_dot = (plus.omega_bar - minus.omega_bar) / (2.0 * h);
    CHECK(theta_dot == doctest::Approx(mid.omega_bar).epsilon(1e-6));
    const double expected =
        -p.alpha * mid.omega_bar - p.gamma * mid.theta_bar + p.sum_p / p.n;
    CHECK(omega_dot == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("sigma coefficients and boundedness for the paper parameter set") {
  BulkParams p;  // N = 2, X = 1, B0 = -0.8, B1 = 1
  const auto env = voltage_envelope(p, {0.0, 1.0, 10.0});
  CHECK(env.sigma1 == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(env.sigma2 == doctest::Approx(1.8).epsilon(1e-12));
  CHECK(env.sigma2_literal == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(env.bounded);
  CHECK_FALSE(env.decoupled);
  // Both consistent bounds converge to E_f / (1 - sigma).
  const auto tail = voltage_envelope(p, {1e4});
  CHECK(tail.upper[0] == doctest::Approx(1.0 / 0.8).epsilon(1e-9));
  CHECK(tail.lower[0] == doctest::Approx(1.0 / 2.8).epsilon(1e-9));
}

TEST_CASE("large networks break the upper voltage bound") {
  BulkParams p;
  p.n = 50;
  const auto env = voltage_envelope(p, {0.0});
  CHECK(env.sigma1 == doctest::Approx(48.2).epsilon(1e-12));
  CHECK_FALSE(env.bounded);
}

TEST_CASE("X = 0 decouples the voltage dynamics") {
  BulkParams p;
  p.x = 0.0;
  p.t_d = 2.0;
  const auto env = voltage_envelope(p, {0.0, 100.0});
  CHECK(env.decoupled);
  CHECK(env.sigma1 == 0.0);
  CHECK(env.lower[1] == doctest::Approx(env.upper[1]).epsilon(1e-12));
  CHECK(env.upper[1] == doctest::Approx(1.0).epsilon(1e-9));  // plain relaxation to E_f
}

TEST_CASE("admissible network sizes for the paper couplings") {
  const auto tight = admissible_network_size(1.0, -0.8, 1.0);
  CHECK(tight.n_min == doctest::Approx(1.0 - 1.8).epsilon(1e-12));
  CHECK(tight.n_max == doctest::Approx(1.0 + 1.8).epsilon(1e-12));
  CHECK(tight.admissible == std::vector<int>{2});

  const auto wide = admissible_network_size(1.0, -0.8, 0.5);
  CHECK(wide.admissible == std::vector<int>{2, 3, 4});
}

TEST_CASE("bulk mean of a simulated run matches the closed form exactly") {
  // Constant voltage and uniform parameters: the mean obeys the scalar ODE,
  // so RK4 on the network and the closed form agree to integrator accuracy.
  HomogeneousSpec spec;
  spec.n = 10;
  spec.gamma = 1.0;
  spec.t_d = 1.0;
  auto sc = homogeneous_scenario("bulk", spec);
  sc.integrator = {0.01, 100.0, 10, 1e6};
  const auto traj = integrate(sc.model, sc.initial_state, {},
                              sc.integrator, {false, true});
  const auto means = bulk_mean_series(traj);
  BulkParams p;
  p.alpha = spec.alpha;
  p.gamma = spec.gamma;
  p.n = spec.n;
  p.sum_p = 0.0;
  p.e_bar_0 = spec.e0;
  double worst = 0.0;
  for (std::size_t k = 0; k < means.times.size(); ++k) {
    const auto ref = analytic_bulk_constant_voltage(p, means.times[k]);
    worst = std::max(worst, std::abs(means.theta_bar[k] - ref.theta_bar));
    worst = std::max(worst, std::abs(means.omega_bar[k] - ref.omega_bar));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("node subset selects which machines enter the mean") {
  HomogeneousSpec spec;
  spec.n = 3;
  auto sc = homogeneous_scenario("subset", spec);
  sc.initial_state.theta = Vec{{1.0, 3.0, 100.0}};
  sc.integrator = {0.01, 0.01, 1, 1e9};
  const auto traj = integrate(sc.model, sc.initial_state, {}, sc.integrator);
  const auto means = bulk_mean_series(traj, {0, 1});
  CHECK(means.theta_bar[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("simulated two-node voltage mean stays inside the envelope") {
  HomogeneousSpec spec;
  spec.gamma = 1.0;
  spec.t_d = 2.0;
  auto sc = homogeneous_scenario("env", spec);
  sc.perturbations.push_back({0, 40.0, 42.0, 1.0});
  sc.integrator = {0.01, 200.0, 10, 1e6};
  const auto traj =
      integrate(sc.model, sc.initial_state, sc.perturbations, sc.integrator);
  REQUIRE_FALSE(traj.diverged);
  const auto means = bulk_mean_series(traj);
  BulkParams p;
  p.gamma = spec.gamma;
  p.t_d = spec.t_d;
  p.e_bar_0 = spec.e0;
  const auto env = voltage_envelope(p, means.times);
  const double slack = 1e-9;
  for (std::size_t k = 0; k < means.times.size(); ++k) {
    CHECK(means.e_bar[k] >= env.lower[k] - slack);
    CHECK(means.e_bar[k] <= env.upper[k] + slack);
  }
}
