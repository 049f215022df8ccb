#include <cmath>
#include <random>

#include "doctest.h"
#include "gridvolt/dynamics.hpp"
#include "gridvolt/presets.hpp"
#include "gridvolt/stability.hpp"

using namespace gridvolt;

namespace {

Scenario two_node(double gamma, double power_magnitude) {
  HomogeneousSpec spec;
  spec.gamma = gamma;
  spec.power_magnitude = power_magnitude;
  return homogeneous_scenario("test", spec);
}

constexpr double kEStar = 1.0 / 0.8;

}  // namespace

TEST_CASE("balanced two-node fixed point is the symmetric one") {
  const auto sc = two_node(1.0, 0.0);
  const auto fp = find_fixed_point(sc.model, Vec::Constant(2, 0.05), Vec::Ones(2));
  CHECK(fp.theta_star.cwiseAbs().maxCoeff() < 1e-10);
  CHECK((fp.e_star.array() - kEStar).abs().maxCoeff() < 1e-10);
  CHECK(fp.residual_norm < 1e-10);
}

TEST_CASE("Newton converges immediately from a converged guess") {
  const auto sc = two_node(1.0, 0.0);
  const auto fp =
      find_fixed_point(sc.model, Vec::Zero(2), Vec::Constant(2, kEStar));
  CHECK(fp.iterations <= 2);
}

TEST_CASE("gamma = 0 gauge: fixed point keeps the guessed phase sum") {
  const auto sc = two_node(0.0, 0.5);
  const Vec guess = Vec{{0.4, 0.2}};
  const auto fp = find_fixed_point(sc.model, guess, Vec::Ones(2));
  CHECK(fp.theta_star.sum() == doctest::Approx(guess.sum()).epsilon(1e-9));
  CHECK(fp.residual_norm < 1e-10);
  // Uniform parameters force equal voltages at any synchronous state.
  CHECK(std::abs(fp.e_star[0] - fp.e_star[1]) < 1e-9);
}

TEST_CASE("Newton throws when no synchronous state exists") {
  auto sc = two_node(1.0, 0.0);
  // Demand more flow than the two-node line can carry.
  sc.model.nodes[0].power_setpoint = 5.0;
  sc.model.nodes[1].power_setpoint = -5.0;
  CHECK_THROWS_AS(find_fixed_point(sc.model, Vec::Zero(2), Vec::Ones(2)),
                  NewtonDiverged);
}

TEST_CASE("fixed point matches the long-run endpoint of the perturbed run") {
  auto sc = two_node(1.0, 0.5);
  sc.perturbations.push_back({0, 40.0, 42.0, 1.0});
  sc.integrator = {0.01, 400.0, 100, 1e6};
  const auto traj =
      integrate(sc.model, sc.initial_state, sc.perturbations, sc.integrator);
  REQUIRE_FALSE(traj.diverged);
  const auto end = traj.state_at(traj.samples() - 1);

  auto post = sc.model;
  post.nodes[0].power_setpoint += 1.0;
  const auto fp = find_fixed_point(post, end.theta, end.e);
  CHECK((fp.theta_star - end.theta).cwiseAbs().maxCoeff() < 1e-4);
  CHECK((fp.e_star - end.e).cwiseAbs().maxCoeff() < 1e-4);
  CHECK(end.omega.cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("linearization blocks at the symmetric point") {
  const auto sc = two_node(1.0, 0.0);
  const auto fp = find_fixed_point(sc.model, Vec::Zero(2), Vec::Constant(2, kEStar));
  const auto blocks = build_linearization(sc.model, fp);

  // Equal phases: Lambda vanishes, P = E*^2 B1 * graph Laplacian.
  CHECK(blocks.lambda.cwiseAbs().maxCoeff() < 1e-12);
  const double w = kEStar * kEStar;  // 1.5625
  CHECK(blocks.p(0, 0) == doctest::Approx(w).epsilon(1e-12));
  CHECK(blocks.p(0, 1) == doctest::Approx(-w).epsilon(1e-12));
  CHECK((blocks.p - blocks.p.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(blocks.j.rows() == 6);
}

TEST_CASE("Jacobian matches central finite differences entrywise") {
  auto sc = two_node(0.5, 0.4);
  const auto fp = find_fixed_point(sc.model, Vec::Zero(2), Vec::Ones(2));
  const auto blocks = build_linearization(sc.model, fp);

  const int n = 2;
  Vec x0(3 * n);
  x0 << fp.theta_star, Vec::Zero(n), fp.e_star;
  auto rhs_vec = [&](const Vec& x) {
    SimState s;
    s.theta = x.head(n);
    s.omega = x.segment(n, n);
    s.e = x.tail(n);
    const auto d = rhs_reduced(0.0, s, sc.model);
    Vec out(3 * n);
    out << d.theta, d.omega, d.e;
    return out;
  };
  const double h = 1e-6;
  double worst = 0.0;
  for (int col = 0; col < 3 * n; ++col) {
    Vec xp = x0, xm = x0;
    xp[col] += h;
    xm[col] -= h;
    const Vec fd = (rhs_vec(xp) - rhs_vec(xm)) / (2.0 * h);
    worst = std::max(worst, (fd - blocks.j.col(col)).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("gamma = 0 gives an exact gauge null vector of J") {
  const auto sc = two_node(0.0, 0.5);
  const auto fp = find_fixed_point(sc.model, Vec::Zero(2), Vec::Ones(2));
  const auto blocks = build_linearization(sc.model, fp);
  Vec gauge = Vec::Zero(6);
  gauge[0] = gauge[1] = 1.0;
  CHECK((blocks.j * gauge).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("spectral verdicts on diagonal test matrices") {
  LinearizationBlocks blocks;
  blocks.j = Vec{{-1.0, -2.0, -3.0}}.asDiagonal();
  auto report = spectral_stability(blocks, false);
  CHECK(report.spectral_abscissa_excl_gauge == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(report.verdict == Verdict::stable);
  CHECK_FALSE(report.gauge_mode_present);

  blocks.j(0, 0) = 0.5;
  report = spectral_stability(blocks, false);
  CHECK(report.verdict == Verdict::unstable);
}

TEST_CASE("gauge eigenvalue is detected and excluded from the abscissa") {
  const auto sc = two_node(0.0, 0.5);
  const auto fp = find_fixed_point(sc.model, Vec::Zero(2), Vec::Ones(2));
  const auto blocks = build_linearization(sc.model, fp);
  const auto report = spectral_stability(blocks, true);
  CHECK(report.gauge_mode_present);
  CHECK(std::abs(report.gauge_eigenvalue) < 1e-9);
  CHECK(report.spectral_abscissa_excl_gauge < -1e-9);
  CHECK(report.verdict == Verdict::stable);
}

TEST_CASE("proposition I at the symmetric two-node point") {
  const auto sc = two_node(1.0, 0.0);
  const auto fp = find_fixed_point(sc.model, Vec::Zero(2), Vec::Constant(2, kEStar));
  const auto blocks = build_linearization(sc.model, fp);
  const auto prop = proposition_one_check(blocks);
  // Projected phase matrix eigenvalue: gamma + 2 E*^2 B1 on the reduced space.
  const double expected = 1.0 + 2.0 * kEStar * kEStar;
  CHECK(prop.condition_1);
  CHECK(prop.condition_1_min_eigenvalue == doctest::Approx(expected).epsilon(1e-10));
  CHECK(prop.condition_2);
  CHECK(prop.condition_2_max_eigenvalue < 0.0);
}

TEST_CASE("proposition check rejects an asymmetric P") {
  const auto sc = two_node(1.0, 0.0);
  const auto fp = find_fixed_point(sc.model, Vec::Zero(2), Vec::Constant(2, kEStar));
  auto blocks = build_linearization(sc.model, fp);
  blocks.p(0, 1) += 1e-3;
  CHECK_THROWS_AS(proposition_one_check(blocks), AsymmetricPInput);
}

TEST_CASE("pseudo-inverse satisfies the Penrose identities") {
  std::mt19937 rng(11);
  std::normal_distribution<double> dist(0.0, 1.0);
  Mat b(4, 3);
  for (int i = 0; i < b.size(); ++i) b.data()[i] = dist(rng);
  const Mat m = b * b.transpose();  // symmetric, rank <= 3
  const Mat pinv = symmetric_pseudo_inverse(m);
  CHECK((m * pinv * m - m).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((pinv * m * pinv - pinv).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(((m * pinv) - (m * pinv).transpose()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("eigen shift identity on worked examples") {
  Mat a = Vec{{1.0, 2.0}}.asDiagonal();
  auto shift = eigen_shift_check(a, 3.0);
  CHECK(shift.passed);
  CHECK(shift.shifted_spectrum[0] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(shift.shifted_spectrum[1] == doctest::Approx(5.0).epsilon(1e-12));

  Mat lap(2, 2);
  lap << 1.0, -1.0, -1.0, 1.0;
  shift = eigen_shift_check(lap, 0.5);
  CHECK(shift.passed);
  CHECK(shift.shifted_spectrum[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(shift.shifted_spectrum[1] == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("eigen shift identity holds for random symmetric matrices") {
  std::mt19937 rng(23);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::uniform_real_distribution<double> gdist(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    Mat b(n, n);
    for (int i = 0; i < b.size(); ++i) b.data()[i] = dist(rng);
    const Mat a = 0.5 * (b + b.transpose());
    const auto shift = eigen_shift_check(a, gdist(rng));
    CHECK(shift.passed);
    CHECK(shift.max_deviation < 1e-10);
  }
}
