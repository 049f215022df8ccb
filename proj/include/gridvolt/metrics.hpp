#pragma once

#include <vector>

#include "gridvolt/bulk.hpp"
#include "gridvolt/dynamics.hpp"

namespace gridvolt {

struct ReturnTimeSpec {
  double characteristic_time = 5.0;  // T [s]
  double tolerance = 1e-4;           // xi
  double t_perturb_end = 0.0;        // [s]
};

struct ReturnTimeResult {
  bool converged = false;
  double return_time = 0.0;  // windowed criterion, measured from t_perturb_end
  double return_time_pointwise = 0.0;  // single-sample lag criterion (as printed)
  bool converged_pointwise = false;
};

// Lag-T stability time of a uniformly sampled mean-voltage series.
// The windowed criterion requires |E(s) - E(s-T)| <= xi for every sample s in
// [t - T, t]; the reported return time is the start of the first such fully
// stable window, relative to t_perturb_end (0 for an identically constant
// series). The pointwise value uses the first single sample satisfying the
// lag criterion and is reported alongside; it can trigger spuriously when an
// oscillation repeats after lag T.
ReturnTimeResult return_time(const std::vector<double>& mean_e,
                             const std::vector<double>& times,
                             const ReturnTimeSpec& spec);

struct SteadyStateReport {
  double omega_bar_measured = 0.0;
  double omega_bar_expected = 0.0;
  double omega_bar_error = 0.0;  // relative when expected != 0, absolute otherwise
  double theta_bar_measured = 0.0;
  double theta_bar_expected = 0.0;
  double theta_bar_error = 0.0;
  bool controlled = false;
};

// Window-averaged late-time means against the bulk asymptotes: omega_bar vs
// sum(P)/(N alpha) for gamma = 0 (vs 0 for gamma > 0), theta_bar vs
// sum(P)/(N gamma) when controlled. Uses the last quarter of the trajectory.
SteadyStateReport steady_state_deviation_check(const Trajectory& trajectory,
                                               const GridModel& model,
                                               const std::vector<Perturbation>& perturbations,
                                               const std::vector<int>& nodes = {});

// True iff over [t_from, t_to] every |omega_i - omega_bar| < tol and each
// pairwise phase difference stays constant within tol.
bool sync_check(const Trajectory& trajectory, double tol, double t_from, double t_to);

}  // namespace gridvolt
