#include "gridvolt/dynamics.hpp"

#include <cmath>
#include <string>

namespace gridvolt {

SimState Trajectory::state_at(int k) const {
  SimState s;
  s.theta = states.row(k).segment(0, n).transpose();
  s.omega = states.row(k).segment(n, n).transpose();
  s.e = states.row(k).segment(2 * n, n).transpose();
  if (has_u) s.u = states.row(k).segment(3 * n, n).transpose();
  return s;
}

Vec ramp_power(double t, const Vec& base, const std::vector<Perturbation>& perturbations) {
  Vec p = base;
  for (const auto& pert : perturbations) {
    double frac;
    if (t < pert.t_start)
      frac = 0.0;
    else if (t >= pert.t_end)
      frac = 1.0;
    else
      frac = (t - pert.t_start) / (pert.t_end - pert.t_start);
    p[pert.node] += frac * pert.delta_p;
  }
  return p;
}

namespace {

void check_dims(const SimState& state, const GridModel& model) {
  const int n = model.size();
  if (state.theta.size() != n || state.omega.size() != n || state.e.size() != n)
    throw DimensionMismatch("state dimension does not match model size " + std::to_string(n));
}

// Coupling sums via the angle-addition identities:
//   sum_j B_ij E_j sin(theta_i - theta_j) = s_i (B Ec)_i - c_i (B Es)_i
//   sum_j B_ij E_j cos(theta_i - theta_j) = c_i (B Ec)_i + s_i (B Es)_i
struct Coupling {
  Vec sin_sum;  // per node
  Vec cos_sum;
};

Coupling coupling_sums(const Vec& theta, const Vec& e, const Mat& B) {
  const Vec s = theta.array().sin();
  const Vec c = theta.array().cos();
  const Vec bec = B * (e.cwiseProduct(c));
  const Vec bes = B * (e.cwiseProduct(s));
  return {s.cwiseProduct(bec) - c.cwiseProduct(bes),
          c.cwiseProduct(bec) + s.cwiseProduct(bes)};
}

}  // namespace

SimState rhs_reduced(double t, const SimState& state, const GridModel& model,
                     const std::vector<Perturbation>& perturbations) {
  check_dims(state, model);
  if (state.has_u())
    throw DimensionMismatch("reduced model state must not carry a control variable u");
  const Vec p = ramp_power(t, model.power(), perturbations);
  const auto cp = coupling_sums(state.theta, state.e, model.susceptance);

  SimState d;
  d.theta = state.omega;
  d.omega = -model.alpha().cwiseProduct(state.omega) -
            model.gamma().cwiseProduct(state.theta) + p -
            state.e.cwiseProduct(cp.sin_sum);
  d.e = (model.e_f() - state.e + model.x().cwiseProduct(cp.cos_sum))
            .cwiseQuotient(model.t_d());
  return d;
}

SimState rhs_full(double t, const SimState& state, const GridModel& model,
                  const std::vector<Perturbation>& perturbations) {
  check_dims(state, model);
  if (!state.has_u())
    throw DimensionMismatch("full model state must carry the control variable u");
  const Vec tau = model.tau_g();
  for (int i = 0; i < model.size(); ++i)
    if (tau[i] <= 0.0)
      throw ZeroControllerTimeConstant("node " + std::to_string(i) +
                                       ": tau_g must be > 0 for the full model; "
                                       "use rhs_reduced when tau_g = 0");
  const Vec p = ramp_power(t, model.power(), perturbations);
  const auto cp = coupling_sums(state.theta, state.e, model.susceptance);

  SimState d;
  d.theta = state.omega;
  d.omega = -model.alpha().cwiseProduct(state.omega) + p -
            state.e.cwiseProduct(cp.sin_sum) + state.u;
  d.e = (model.e_f() - state.e + model.x().cwiseProduct(cp.cos_sum))
            .cwiseQuotient(model.t_d());
  d.u = (-state.u - model.gamma().cwiseProduct(state.theta) -
         model.beta().cwiseProduct(state.omega))
            .cwiseQuotient(tau);
  return d;
}

namespace {

Vec pack(const SimState& s) {
  const int n = static_cast<int>(s.theta.size());
  const bool with_u = s.has_u();
  Vec y(with_u ? 4 * n : 3 * n);
  y.segment(0, n) = s.theta;
  y.segment(n, n) = s.omega;
  y.segment(2 * n, n) = s.e;
  if (with_u) y.segment(3 * n, n) = s.u;
  return y;
}

SimState unpack(const Vec& y, int n, bool with_u) {
  SimState s;
  s.theta = y.segment(0, n);
  s.omega = y.segment(n, n);
  s.e = y.segment(2 * n, n);
  if (with_u) s.u = y.segment(3 * n, n);
  return s;
}

}  // namespace

Trajectory integrate(const GridModel& model, const SimState& initial,
                     const std::vector<Perturbation>& perturbations,
                     const IntegratorSettings& settings,
                     const IntegrateOptions& options) {
  if (!(settings.dt > 0.0) || !(settings.t_final > 0.0))
    throw GridError("integrator settings require dt > 0 and t_final > 0");
  if (settings.sample_stride < 1) throw GridError("sample_stride must be >= 1");
  for (const auto& pert : perturbations) {
    if (pert.node < 0 || pert.node >= model.size())
      throw DimensionMismatch("perturbation references node " + std::to_string(pert.node));
    if (!(pert.t_end > pert.t_start))
      throw GridError("perturbation on node " + std::to_string(pert.node) +
                      " requires t_end > t_start");
  }

  const int n = model.size();
  const bool with_u = options.use_full_model;
  const int dim = with_u ? 4 * n : 3 * n;
  const long steps = std::lround(settings.t_final / settings.dt);
  const long max_samples = steps / settings.sample_stride + 2;

  auto deriv = [&](double t, const Vec& y) -> Vec {
    SimState s = unpack(y, n, with_u);
    SimState d = with_u ? rhs_full(t, s, model, perturbations)
                        : rhs_reduced(t, s, model, perturbations);
    if (options.constant_voltage) d.e.setZero();
    return pack(d);
  };

  Trajectory traj;
  traj.n = n;
  traj.has_u = with_u;
  traj.states.resize(max_samples, dim);
  traj.times.reserve(max_samples);

  Vec y = pack(initial);
  if (with_u && initial.u.size() == 0) {
    y.conservativeResize(dim);
    y.segment(3 * n, n).setZero();
  }
  const double dt = settings.dt;
  long row = 0;
  auto record = [&](double t, const Vec& yy) {
    traj.states.row(row++) = yy.transpose();
    traj.times.push_back(t);
  };
  record(0.0, y);

  for (long k = 0; k < steps; ++k) {
    const double t = k * dt;
    const Vec k1 = deriv(t, y);
    const Vec k2 = deriv(t + 0.5 * dt, y + 0.5 * dt * k1);
    const Vec k3 = deriv(t + 0.5 * dt, y + 0.5 * dt * k2);
    const Vec k4 = deriv(t + dt, y + dt * k3);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double tk = (k + 1) * dt;
    // Phases are excluded from the bound: theta unwinds without limit in any
    // drifting (uncontrolled) run while the physical variables stay bounded.
    if (!y.allFinite() ||
        y.tail(dim - n).cwiseAbs().maxCoeff() > settings.blowup_bound) {
      traj.diverged = true;
      traj.diverged_time = tk;
      break;
    }
    if ((k + 1) % settings.sample_stride == 0 || k + 1 == steps) record(tk, y);
  }
  traj.states.conservativeResize(row, dim);
  return traj;
}

}  // namespace gridvolt
