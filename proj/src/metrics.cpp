#include "gridvolt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gridvolt {

ReturnTimeResult return_time(const std::vector<double>& mean_e,
                             const std::vector<double>& times,
                             const ReturnTimeSpec& spec) {
  if (!(spec.characteristic_time > 0.0) || !(spec.tolerance > 0.0))
    throw GridError("return time requires T > 0 and xi > 0");
  if (times.size() < 2 || mean_e.size() != times.size())
    throw InsufficientSeriesLength("series too short for return-time evaluation");
  const double dt = times[1] - times[0];
  const int lag = static_cast<int>(std::lround(spec.characteristic_time / dt));
  if (lag < 1)
    throw InsufficientSeriesLength("characteristic time shorter than the sample step");
  const int m = static_cast<int>(times.size());
  if (times.back() < spec.t_perturb_end + 2.0 * spec.characteristic_time)
    throw InsufficientSeriesLength("series must cover [t_perturb_end, t_perturb_end + 2T]");

  // First index with t >= t_perturb_end + T.
  int start = 0;
  while (start < m && times[start] < spec.t_perturb_end + spec.characteristic_time - 0.5 * dt)
    ++start;
  start = std::max(start, lag);

  auto lag_ok = [&](int k) { return std::abs(mean_e[k] - mean_e[k - lag]) <= spec.tolerance; };

  ReturnTimeResult out;
  for (int k = start; k < m; ++k) {
    if (lag_ok(k)) {
      out.converged_pointwise = true;
      out.return_time_pointwise = std::max(0.0, times[k] - spec.t_perturb_end);
      break;
    }
  }

  // Windowed: criterion must hold on every sample of [t - T, t]; report the
  // start of that window relative to the end of the perturbation.
  int run = 0;  // consecutive samples satisfying the lag criterion, ending at k
  for (int k = lag; k < m; ++k) {
    run = lag_ok(k) ? run + 1 : 0;
    if (times[k] < spec.t_perturb_end + spec.characteristic_time - 0.5 * dt) continue;
    if (run >= lag + 1) {
      out.converged = true;
      out.return_time = std::max(0.0, times[k - lag] - spec.t_perturb_end);
      return out;
    }
  }
  return out;
}

SteadyStateReport steady_state_deviation_check(const Trajectory& trajectory,
                                               const GridModel& model,
                                               const std::vector<Perturbation>& perturbations,
                                               const std::vector<int>& nodes) {
  const auto means = bulk_mean_series(trajectory, nodes);
  const int m = static_cast<int>(means.times.size());
  const int from = (3 * m) / 4;  // last quarter, past transients
  double omega_avg = 0.0, theta_avg = 0.0;
  for (int k = from; k < m; ++k) {
    omega_avg += means.omega_bar[k];
    theta_avg += means.theta_bar[k];
  }
  omega_avg /= double(m - from);
  theta_avg /= double(m - from);

  std::vector<int> idx = nodes;
  if (idx.empty())
    for (int i = 0; i < trajectory.n; ++i) idx.push_back(i);
  double sum_p = 0.0, alpha_sum = 0.0, gamma_sum = 0.0;
  for (int i : idx) {
    sum_p += model.nodes[i].power_setpoint;
    alpha_sum += model.nodes[i].damping;
    gamma_sum += model.nodes[i].secondary_gain;
  }
  for (const auto& pert : perturbations) sum_p += pert.delta_p;
  const double n = double(idx.size());
  const double alpha = alpha_sum / n;
  const double gamma = gamma_sum / n;

  SteadyStateReport out;
  out.controlled = gamma > 0.0;
  out.omega_bar_measured = omega_avg;
  out.theta_bar_measured = theta_avg;
  auto err = [](double measured, double expected) {
    return expected != 0.0 ? std::abs(measured - expected) / std::abs(expected)
                           : std::abs(measured);
  };
  if (out.controlled) {
    out.omega_bar_expected = 0.0;
    out.theta_bar_expected = sum_p / (n * gamma);
  } else {
    out.omega_bar_expected = sum_p / (n * alpha);
    out.theta_bar_expected = theta_avg;  // drifts linearly; not compared
  }
  out.omega_bar_error = err(omega_avg, out.omega_bar_expected);
  out.theta_bar_error = err(theta_avg, out.theta_bar_expected);
  return out;
}

bool sync_check(const Trajectory& trajectory, double tol, double t_from, double t_to) {
  if (trajectory.samples() == 0) throw GridError("sync check on an empty trajectory");
  const int n = trajectory.n;
  bool any = false;
  Vec first_diff;
  for (int k = 0; k < trajectory.samples(); ++k) {
    const double t = trajectory.times[k];
    if (t < t_from || t > t_to) continue;
    any = true;
    const Vec theta = trajectory.states.row(k).segment(0, n).transpose();
    const Vec omega = trajectory.states.row(k).segment(n, n).transpose();
    const double omega_bar = omega.mean();
    if ((omega.array() - omega_bar).abs().maxCoeff() >= tol) return false;
    // Pairwise differences relative to node 0 pin all pairs.
    Vec diff = theta.array() - theta[0];
    if (first_diff.size() == 0)
      first_diff = diff;
    else if ((diff - first_diff).cwiseAbs().maxCoeff() >= tol)
      return false;
  }
  if (!any) throw GridError("sync window [" + std::to_string(t_from) + ", " +
                            std::to_string(t_to) + "] contains no samples");
  return true;
}

}  // namespace gridvolt
