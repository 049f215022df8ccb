#pragma once

#include "gridvolt/model.hpp"
#include "gridvolt/scenario.hpp"

namespace gridvolt {

// Network families used throughout: all-to-all coupling with uniform diagonal
// B0 and link strength B1, and N leaves attached to a common bus.
struct TopologySpec {
  enum class Kind { all_to_all, star_bus };
  Kind kind = Kind::all_to_all;
  int n = 2;        // node count, excluding the bus for star_bus
  double b0 = -0.8; // diagonal susceptance
  double b1 = 1.0;  // link susceptance
};

// N x N matrix with B0 on the diagonal and B1 everywhere else.
Mat all_to_all_susceptance(const TopologySpec& spec);

struct StarBusMatrices {
  Mat explicit_bus;   // (N+1)x(N+1); node 0 is the bus
  Mat kron_reduced;   // N x N effective coupling after bus elimination
};

// Star topology: bus node 0 linked to every leaf with strength B1, diagonal
// B0 everywhere, no leaf-leaf entries. The reduced form eliminates the bus by
// standard passive-node (Schur) elimination; throws BusEliminationSingular
// when the bus self-term is zero.
StarBusMatrices star_bus_susceptance(const TopologySpec& spec);

// Published power setpoints of the 20-node common-bus case study.
const std::vector<double>& heterogeneous_power_values();

struct HeterogeneousOptions {
  bool controlled = true;    // gamma_i = |P_i| when true, 0 otherwise
  bool explicit_bus = true;  // model the bus as a zero-power dynamical node
};

// The 20-machine common-bus scenario: alpha_i = 0.2|P_i|, gamma_i = |P_i|
// (or 0), star topology with B0 = -0.8, B1 = 1, ramp perturbation on the
// first machine as in the homogeneous experiments.
Scenario heterogeneous_case_study(const HeterogeneousOptions& options = {});

}  // namespace gridvolt
