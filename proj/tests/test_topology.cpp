#include <cmath>

#include "doctest.h"
#include "gridvolt/topology.hpp"

using namespace gridvolt;

TEST_CASE("all_to_all_susceptance matches the paper's two-node matrix") {
  const Mat b = all_to_all_susceptance({TopologySpec::Kind::all_to_all, 2, -0.8, 1.0});
  CHECK(b(0, 0) == -0.8);
  CHECK(b(1, 1) == -0.8);
  CHECK(b(0, 1) == 1.0);
  CHECK(b(1, 0) == 1.0);
}

TEST_CASE("all_to_all_susceptance zero-diagonal case") {
  const Mat b = all_to_all_susceptance({TopologySpec::Kind::all_to_all, 3, 0.0, 1.0});
  CHECK(b.diagonal().isZero(0.0));
  CHECK(b(0, 1) == 1.0);
  CHECK(b(2, 1) == 1.0);
}

TEST_CASE("all_to_all_susceptance N=10 row sums") {
  const Mat b = all_to_all_susceptance({TopologySpec::Kind::all_to_all, 10, -0.8, 1.0});
  for (int i = 0; i < 10; ++i)
    CHECK(b.row(i).sum() == doctest::Approx(8.2).epsilon(1e-14));
  // bitwise symmetry by construction
  CHECK((b - b.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("topology spec invariants") {
  CHECK_THROWS_AS(all_to_all_susceptance({TopologySpec::Kind::all_to_all, 1, -0.8, 1.0}),
                  GridError);
  CHECK_THROWS_AS(star_bus_susceptance({TopologySpec::Kind::star_bus, 1, -0.8, 1.0}),
                  GridError);
  CHECK_THROWS_AS(all_to_all_susceptance({TopologySpec::Kind::all_to_all, 3, -0.8, 0.0}),
                  GridError);
}

TEST_CASE("star_bus_susceptance explicit form has the star pattern") {
  const auto mats = star_bus_susceptance({TopologySpec::Kind::star_bus, 2, -0.8, 1.0});
  const Mat& b = mats.explicit_bus;
  REQUIRE(b.rows() == 3);
  CHECK(b(0, 1) == 1.0);
  CHECK(b(0, 2) == 1.0);
  CHECK(b(1, 0) == 1.0);
  CHECK(b(1, 2) == 0.0);  // no leaf-leaf coupling
  CHECK(b(2, 1) == 0.0);
  CHECK(b(1, 1) == -0.8);
  CHECK(b(2, 2) == -0.8);
  // Bus self-term is admittance-consistent: shunt minus the sum of its links.
  CHECK(b(0, 0) == doctest::Approx(-0.8 - 2.0).epsilon(1e-14));
  CHECK((b - b.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("star_bus_susceptance reduced form from symbolic bus elimination") {
  // Schur elimination of the bus with self-term s = B0 - N B1:
  // B_red = B0 - B1^2/s on the diagonal and -B1^2/s off the diagonal.
  const auto mats = star_bus_susceptance({TopologySpec::Kind::star_bus, 4, -0.8, 1.0});
  const Mat& r = mats.kron_reduced;
  REQUIRE(r.rows() == 4);
  const double w = 1.0 / 4.8;  // -B1^2/(B0 - 4 B1)
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(r(i, j) == doctest::Approx(i == j ? -0.8 + w : w).epsilon(1e-14));
  CHECK((r - r.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("star bus elimination is singular for zero bus self-term") {
  // shunt B0 = N B1 cancels the link sum exactly
  CHECK_THROWS_AS(star_bus_susceptance({TopologySpec::Kind::star_bus, 3, 3.0, 1.0}),
                  BusEliminationSingular);
}

TEST_CASE("two leaves through one bus couple as a scaled two-node link") {
  const auto mats = star_bus_susceptance({TopologySpec::Kind::star_bus, 2, -0.8, 1.0});
  const Mat direct = all_to_all_susceptance({TopologySpec::Kind::all_to_all, 2, -0.8, 1.0});
  const double scale = mats.kron_reduced(0, 1) / direct(0, 1);
  CHECK(scale > 0.0);
  CHECK(mats.kron_reduced(1, 0) == doctest::Approx(scale * direct(1, 0)).epsilon(1e-14));
}

TEST_CASE("heterogeneous case study parameters") {
  const auto sc = heterogeneous_case_study();
  REQUIRE(sc.model.size() == 21);  // explicit bus + 20 machines
  // First machine: P = -0.4 -> alpha = 0.08, gamma = 0.4
  CHECK(sc.model.nodes[1].power_setpoint == -0.4);
  CHECK(sc.model.nodes[1].damping == doctest::Approx(0.08).epsilon(1e-14));
  CHECK(sc.model.nodes[1].secondary_gain == doctest::Approx(0.4).epsilon(1e-14));
  // Bus carries no power and median-magnitude parameters.
  CHECK(sc.model.nodes[0].power_setpoint == 0.0);
  CHECK(sc.model.nodes[0].secondary_gain == doctest::Approx(0.5).epsilon(1e-14));

  // The published list is slightly imbalanced; freeze the actual sum.
  double sum = 0.0;
  for (double p : heterogeneous_power_values()) sum += p;
  CHECK(sum == doctest::Approx(-0.02).epsilon(1e-9));

  const auto uncontrolled = heterogeneous_case_study({false, true});
  for (const auto& nd : uncontrolled.model.nodes) CHECK(nd.secondary_gain == 0.0);
  CHECK(uncontrolled.model.nodes[1].damping == doctest::Approx(0.08).epsilon(1e-14));
}
