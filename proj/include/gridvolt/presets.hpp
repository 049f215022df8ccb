#pragma once

#include <string>
#include <vector>

#include "gridvolt/scenario.hpp"

namespace gridvolt {

// Building blocks shared by the figure presets.
struct HomogeneousSpec {
  int n = 2;
  double power_magnitude = 0.5;  // alternating +/- generator/consumer setpoints
  double alpha = 0.2;
  double gamma = 0.0;
  double t_d = 2.0;
  double e_f = 1.0;
  double x = 1.0;
  double b0 = -0.8;
  double b1 = 1.0;
  double e0 = 1.14;
};

Scenario homogeneous_scenario(const std::string& name, const HomogeneousSpec& spec);

// The experiments behind the paper's six figures, as runnable scenarios:
//   fig1  unperturbed 2-node, gamma in {0, 1}
//   fig2  2-node with ramp P_dist = +1, gamma in {0, 1}
//   fig3  N in {2, 10, 20, 50}, gamma = 0, ramp P_dist = +1
//   fig4  same sizes, gamma = 1
//   fig5  2-node return-time sweep over gamma, P_dist = -1
//   fig6  heterogeneous 20-machine common bus, controlled and uncontrolled
// Throws UnknownPreset for any other name.
std::vector<Scenario> preset_scenarios(const std::string& name);

const std::vector<std::string>& preset_names();

}  // namespace gridvolt
