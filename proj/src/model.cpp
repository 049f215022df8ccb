#include "gridvolt/model.hpp"

#include <string>

namespace gridvolt {

const GridModel& validate_model(const GridModel& model) {
  const int n = model.size();
  if (n < 2) throw GridError("model must have at least 2 nodes, got " + std::to_string(n));
  if (model.susceptance.rows() != n || model.susceptance.cols() != n)
    throw NonSymmetricSusceptance("susceptance matrix is " +
                                  std::to_string(model.susceptance.rows()) + "x" +
                                  std::to_string(model.susceptance.cols()) +
                                  " but the model has " + std::to_string(n) + " nodes");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (model.susceptance(i, j) != model.susceptance(j, i))
        throw NonSymmetricSusceptance("B[" + std::to_string(i) + "][" + std::to_string(j) +
                                      "] != B[" + std::to_string(j) + "][" + std::to_string(i) + "]");
  for (int i = 0; i < n; ++i) {
    const auto& nd = model.nodes[i];
    if (!(nd.damping > 0.0))
      throw NegativeGain("node " + std::to_string(i) + ": alpha must be > 0");
    if (nd.secondary_gain < 0.0)
      throw NegativeGain("node " + std::to_string(i) + ": gamma must be >= 0");
    if (!(nd.voltage_time_constant > 0.0))
      throw NonPositiveTimeConstant("node " + std::to_string(i) + ": T_d must be > 0");
    if (nd.controller_time_constant < 0.0)
      throw NonPositiveTimeConstant("node " + std::to_string(i) + ": tau_g must be >= 0");
    if (!(nd.field_voltage > 0.0))
      throw NegativeGain("node " + std::to_string(i) + ": E_f must be > 0");
  }
  return model;
}

GridModel reduce_full_model(const GridModel& model) {
  GridModel reduced = model;
  for (auto& nd : reduced.nodes) {
    nd.damping += nd.derivative_gain;
    nd.derivative_gain = 0.0;
    nd.controller_time_constant = 0.0;
  }
  return reduced;
}

}  // namespace gridvolt
