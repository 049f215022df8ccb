#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gridvolt/errors.hpp"

namespace gridvolt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Per-node machine and controller parameters (per-unit unless noted).
// The reduced model uses damping/secondary_gain only; controller_time_constant
// and derivative_gain enter the full model with explicit controller state.
struct NodeParams {
  double power_setpoint = 0.0;           // P*, signed: generator > 0
  double damping = 0.2;                  // alpha [1/s]
  double secondary_gain = 0.0;           // gamma [1/s^2]
  double voltage_time_constant = 1.0;    // T_d [s]
  double field_voltage = 1.0;            // E_f
  double reactance_diff = 1.0;           // X = X_d - X_d'
  double controller_time_constant = 0.0; // tau_g [s], full model only
  double derivative_gain = 0.0;          // beta [1/s], full model only
};

// Immutable after validation; safe to share read-only across runs.
struct GridModel {
  std::vector<NodeParams> nodes;
  Mat susceptance;                // N x N symmetric
  double nominal_frequency = 50.0; // f0 [Hz], display-only offset

  [[nodiscard]] int size() const { return static_cast<int>(nodes.size()); }

  [[nodiscard]] Vec power() const { return field(&NodeParams::power_setpoint); }
  [[nodiscard]] Vec alpha() const { return field(&NodeParams::damping); }
  [[nodiscard]] Vec gamma() const { return field(&NodeParams::secondary_gain); }
  [[nodiscard]] Vec t_d() const { return field(&NodeParams::voltage_time_constant); }
  [[nodiscard]] Vec e_f() const { return field(&NodeParams::field_voltage); }
  [[nodiscard]] Vec x() const { return field(&NodeParams::reactance_diff); }
  [[nodiscard]] Vec tau_g() const { return field(&NodeParams::controller_time_constant); }
  [[nodiscard]] Vec beta() const { return field(&NodeParams::derivative_gain); }

  [[nodiscard]] bool gamma_all_zero() const {
    for (const auto& nd : nodes)
      if (nd.secondary_gain != 0.0) return false;
    return true;
  }

 private:
  [[nodiscard]] Vec field(double NodeParams::* m) const {
    Vec v(size());
    for (int i = 0; i < size(); ++i) v[i] = nodes[i].*m;
    return v;
  }
};

// State of one network in the co-rotating deviation frame.
// omega is the deviation from nominal; u is present only for the full model.
struct SimState {
  Vec theta;  // phase angles [rad]
  Vec omega;  // frequency deviations [rad/s]
  Vec e;      // voltage amplitudes
  Vec u;      // controller outputs (size 0 when absent)

  [[nodiscard]] bool has_u() const { return u.size() > 0; }
};

// Checks all type invariants; returns the model unchanged on success.
// Throws NonSymmetricSusceptance, NonPositiveTimeConstant or NegativeGain,
// each naming the offending node or entry.
const GridModel& validate_model(const GridModel& model);

// Absorbs the derivative controller gain into the damping term:
// tau_g := 0, alpha := alpha + beta, beta := 0. Idempotent.
GridModel reduce_full_model(const GridModel& model);

}  // namespace gridvolt
