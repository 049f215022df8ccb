#pragma once

#include <vector>

#include "gridvolt/model.hpp"

namespace gridvolt {

// Scheduled power change at a single node: zero before t_start, linear ramp
// on [t_start, t_end], full delta_p afterwards.
struct Perturbation {
  int node = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  double delta_p = 0.0;  // P_dist, signed
};

struct IntegratorSettings {
  double dt = 0.01;           // fixed RK4 step [s]
  double t_final = 200.0;     // [s]
  int sample_stride = 10;     // record every stride-th step
  double blowup_bound = 1e6;  // per-unit magnitude triggering the diverged flag
};

// Sampled time series of stacked states. Column layout:
// [theta_1..N | omega_1..N | E_1..N | u_1..N (full model only)].
struct Trajectory {
  std::vector<double> times;
  Mat states;  // one row per sample
  int n = 0;
  bool has_u = false;
  bool diverged = false;
  double diverged_time = 0.0;

  [[nodiscard]] int samples() const { return static_cast<int>(times.size()); }
  [[nodiscard]] auto theta() const { return states.middleCols(0, n); }
  [[nodiscard]] auto omega() const { return states.middleCols(n, n); }
  [[nodiscard]] auto voltage() const { return states.middleCols(2 * n, n); }
  [[nodiscard]] auto control() const { return states.middleCols(3 * n, n); }
  [[nodiscard]] SimState state_at(int k) const;
  [[nodiscard]] double sample_dt() const {
    return times.size() > 1 ? times[1] - times[0] : 0.0;
  }
};

// Effective per-node power at time t: base setpoints plus ramped perturbations.
Vec ramp_power(double t, const Vec& base, const std::vector<Perturbation>& perturbations);

// Reduced model (tau_g = 0), Eq.-of-motion right-hand side. State must not carry u.
SimState rhs_reduced(double t, const SimState& state, const GridModel& model,
                     const std::vector<Perturbation>& perturbations = {});

// Full model with explicit first-order controller state u; requires tau_g > 0
// on every node (throws ZeroControllerTimeConstant otherwise).
SimState rhs_full(double t, const SimState& state, const GridModel& model,
                  const std::vector<Perturbation>& perturbations = {});

struct IntegrateOptions {
  bool use_full_model = false;
  bool constant_voltage = false;  // freeze E (classic Kuramoto-with-control limit)
};

// Fixed-step classical RK4. The trajectory is flagged diverged (and truncated)
// at the first step where any omega/E/u magnitude exceeds blowup_bound or any
// state goes non-finite; phases are exempt since they unwind in drifting runs.
Trajectory integrate(const GridModel& model, const SimState& initial,
                     const std::vector<Perturbation>& perturbations,
                     const IntegratorSettings& settings,
                     const IntegrateOptions& options = {});

}  // namespace gridvolt
