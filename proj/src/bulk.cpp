#include "gridvolt/bulk.hpp"

#include <cmath>

namespace gridvolt {

BulkMeanPoint analytic_bulk_constant_voltage(const BulkParams& params, double t) {
  const double alpha = params.alpha;
  const double drive = params.sum_p / double(params.n);

  if (params.gamma > 0.0) {
    const double gamma = params.gamma;
    const double steady = drive / gamma;   // sum(P) / (N gamma)
    const double a0 = params.theta_bar_0 - steady;
    const double disc = alpha * alpha - 4.0 * gamma;

    if (disc > 1e-12) {  // overdamped: two real rates
      const double r1 = 0.5 * (-alpha + std::sqrt(disc));
      const double r2 = 0.5 * (-alpha - std::sqrt(disc));
      const double c1 = (params.omega_bar_0 - r2 * a0) / (r1 - r2);
      const double c2 = a0 - c1;
      return {c1 * std::exp(r1 * t) + c2 * std::exp(r2 * t) + steady,
              c1 * r1 * std::exp(r1 * t) + c2 * r2 * std::exp(r2 * t)};
    }
    if (disc < -1e-12) {  // underdamped complex pair in real form
      const double mu = 0.5 * std::sqrt(-disc);
      const double b = (params.omega_bar_0 + 0.5 * alpha * a0) / mu;
      const double env = std::exp(-0.5 * alpha * t);
      const double cs = std::cos(mu * t);
      const double sn = std::sin(mu * t);
      const double theta = env * (a0 * cs + b * sn) + steady;
      const double omega =
          env * ((-0.5 * alpha * a0 + mu * b) * cs + (-0.5 * alpha * b - mu * a0) * sn);
      return {theta, omega};
    }
    // Critically damped: r1 = r2 = -alpha/2.
    const double r = -0.5 * alpha;
    const double b = params.omega_bar_0 - r * a0;
    const double env = std::exp(r * t);
    return {(a0 + b * t) * env + steady, (b + r * (a0 + b * t)) * env};
  }

  // Uncontrolled: linear drift at sum(P)/(N alpha) plus exponential relaxation.
  const double k = drive / alpha;
  const double d2 = (k - params.omega_bar_0) / alpha;
  const double d1 = params.theta_bar_0 - d2;
  const double env = std::exp(-alpha * t);
  return {d1 + d2 * env + k * t, -alpha * d2 * env + k};
}

BulkEnvelope voltage_envelope(const BulkParams& params, const std::vector<double>& times) {
  BulkEnvelope env;
  env.times = times;
  env.sigma1 = params.x * (params.b0 + (params.n - 1) * params.b1);
  env.sigma2 = -params.x * (params.b0 - (params.n - 1) * params.b1);
  env.sigma2_literal = -params.x * (params.b0 + (params.n - 1) * params.b1);
  env.bounded = (1.0 - env.sigma1 > 0.0) && (1.0 + env.sigma2_literal > 0.0);
  env.decoupled = params.x == 0.0;

  const double e0 = params.e_bar_0;
  const double ef = params.e_f;
  const double td = params.t_d;
  auto curve = [&](double rate, double asymptote, double t) {
    const double decay = std::exp(-rate * t / td);
    return e0 * decay + asymptote * (1.0 - decay);
  };

  const double up_rate = 1.0 - env.sigma1;
  const double lo_rate = 1.0 + env.sigma2;
  const double lo_rate_lit = 1.0 + env.sigma2_literal;
  env.upper.reserve(times.size());
  for (double t : times) {
    env.upper.push_back(curve(up_rate, ef / up_rate, t));
    env.lower.push_back(curve(lo_rate, ef / lo_rate, t));
    env.upper_literal.push_back(curve(up_rate, ef / (td * up_rate), t));
    env.lower_literal.push_back(curve(lo_rate_lit, ef / (td * lo_rate_lit), t));
  }
  return env;
}

AdmissibleSize admissible_network_size(double x, double b0, double b1) {
  if (b1 == 0.0) throw GridError("admissible size requires B1 != 0");
  const double half_width = x * (1.0 - b0) / b1;
  AdmissibleSize out;
  out.n_min = 1.0 - half_width;
  out.n_max = 1.0 + half_width;
  const int lo = std::max(2, static_cast<int>(std::ceil(out.n_min)));
  const int hi = static_cast<int>(std::floor(out.n_max));
  for (int n = lo; n <= hi; ++n) out.admissible.push_back(n);
  return out;
}

BulkMeanSeries bulk_mean_series(const Trajectory& trajectory, const std::vector<int>& nodes) {
  if (trajectory.samples() == 0) throw GridError("bulk mean of an empty trajectory");
  std::vector<int> idx = nodes;
  if (idx.empty())
    for (int i = 0; i < trajectory.n; ++i) idx.push_back(i);

  BulkMeanSeries out;
  out.times = trajectory.times;
  const int m = trajectory.samples();
  out.theta_bar.resize(m);
  out.omega_bar.resize(m);
  out.e_bar.resize(m);
  const double inv = 1.0 / double(idx.size());
  for (int k = 0; k < m; ++k) {
    double st = 0.0, so = 0.0, se = 0.0;
    for (int i : idx) {
      st += trajectory.states(k, i);
      so += trajectory.states(k, trajectory.n + i);
      se += trajectory.states(k, 2 * trajectory.n + i);
    }
    out.theta_bar[k] = st * inv;
    out.omega_bar[k] = so * inv;
    out.e_bar[k] = se * inv;
  }
  return out;
}

}  // namespace gridvolt
