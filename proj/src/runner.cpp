#include "gridvolt/runner.hpp"

#include <cmath>
#include <filesystem>
#include <future>

#include "gridvolt/io.hpp"
#include "gridvolt/metrics.hpp"
#include "gridvolt/presets.hpp"
#include "gridvolt/stability.hpp"
#include "json.hpp"

namespace gridvolt {

namespace {

using nlohmann::json;

std::string out_path(const RunOptions& options, const std::string& file) {
  std::filesystem::create_directories(options.out_dir);
  return (std::filesystem::path(options.out_dir) / file).string();
}

Scenario with_overrides(Scenario sc, const RunOptions& options) {
  if (options.dt) sc.integrator.dt = *options.dt;
  if (options.t_final) sc.integrator.t_final = *options.t_final;
  return sc;
}

bool wants(const Scenario& sc, const std::string& analysis) {
  for (const auto& a : sc.analyses)
    if (a == analysis) return true;
  return false;
}

json stability_report_json(const Scenario& sc) {
  // Fixed point of the post-perturbation operating point; the initial state
  // seeds the Newton iteration.
  GridModel model = sc.model;
  for (const auto& p : sc.perturbations)
    model.nodes[p.node].power_setpoint += p.delta_p;
  const FixedPoint fp =
      find_fixed_point(model, sc.initial_state.theta, sc.initial_state.e);
  const auto blocks = build_linearization(model, fp);
  const auto spectral = spectral_stability(blocks, model.gamma_all_zero());
  const auto prop = proposition_one_check(blocks);

  json eigs = json::array();
  for (const auto& mu : spectral.eigenvalues) eigs.push_back({mu.real(), mu.imag()});
  json fp_json;
  fp_json["theta"] = std::vector<double>(fp.theta_star.begin(), fp.theta_star.end());
  fp_json["e"] = std::vector<double>(fp.e_star.begin(), fp.e_star.end());
  fp_json["residual_norm"] = fp.residual_norm;
  return json{{"schema_version", 1},
              {"scenario", sc.name},
              {"fixed_point", fp_json},
              {"eigenvalues", eigs},
              {"spectral_abscissa_excl_gauge", spectral.spectral_abscissa_excl_gauge},
              {"gauge_mode_present", spectral.gauge_mode_present},
              {"proposition_condition_1", prop.condition_1},
              {"proposition_condition_2", prop.condition_2},
              {"condition_1_min_eigenvalue", prop.condition_1_min_eigenvalue},
              {"condition_2_max_eigenvalue", prop.condition_2_max_eigenvalue},
              {"verdict", to_string(spectral.verdict)}};
}

}  // namespace

std::optional<BulkParams> uniform_bulk_params(const Scenario& sc) {
  std::vector<int> idx = sc.bulk_nodes;
  if (idx.empty())
    for (int i = 0; i < sc.model.size(); ++i) idx.push_back(i);
  const auto& first = sc.model.nodes[idx.front()];
  for (int i : idx) {
    const auto& nd = sc.model.nodes[i];
    if (nd.damping != first.damping || nd.secondary_gain != first.secondary_gain ||
        nd.voltage_time_constant != first.voltage_time_constant ||
        nd.field_voltage != first.field_voltage ||
        nd.reactance_diff != first.reactance_diff)
      return std::nullopt;
  }
  const Mat& b = sc.model.susceptance;
  const double b0 = b(idx[0], idx[0]);
  const double b1 = idx.size() > 1 ? b(idx[0], idx[1]) : 0.0;
  for (size_t a = 0; a < idx.size(); ++a)
    for (size_t c = 0; c < idx.size(); ++c) {
      const double expected = (a == c) ? b0 : b1;
      if (b(idx[a], idx[c]) != expected) return std::nullopt;
    }

  BulkParams p;
  p.alpha = first.damping;
  p.gamma = first.secondary_gain;
  p.n = static_cast<int>(idx.size());
  p.t_d = first.voltage_time_constant;
  p.e_f = first.field_voltage;
  p.x = first.reactance_diff;
  p.b0 = b0;
  p.b1 = b1;
  double sum_p = 0.0;
  for (int i : idx) sum_p += sc.model.nodes[i].power_setpoint;
  for (const auto& pert : sc.perturbations) sum_p += pert.delta_p;
  p.sum_p = sum_p;
  p.theta_bar_0 = sc.initial_state.theta.mean();
  p.omega_bar_0 = sc.initial_state.omega.mean();
  p.e_bar_0 = sc.initial_state.e.mean();
  return p;
}

namespace {

RunResult run_single(const Scenario& scenario, const RunOptions& options,
                     ReturnTimeResult* rt_out = nullptr) {
  const Scenario sc = with_overrides(scenario, options);
  validate_scenario(sc);
  RunResult result;

  const bool needs_trajectory =
      wants(sc, "simulate") || wants(sc, "bulk") || wants(sc, "return-time");
  Trajectory traj;
  if (needs_trajectory) {
    traj = integrate(sc.model, sc.initial_state, sc.perturbations, sc.integrator,
                     {sc.use_full_model, sc.constant_voltage});
    if (traj.diverged) {
      result.numerical_failure = true;
      result.failure_reason = sc.name + ": trajectory diverged at t = " +
                              std::to_string(traj.diverged_time);
    }
  }

  if (wants(sc, "simulate")) {
    const auto path = out_path(options, sc.name + "_traj.csv");
    write_trajectory_csv(path, traj);
    result.files.push_back(path);
  }

  if (wants(sc, "bulk")) {
    const auto means = bulk_mean_series(traj, sc.bulk_nodes);
    const auto params = uniform_bulk_params(sc);
    json report;
    report["schema_version"] = 1;
    report["scenario"] = sc.name;
    report["diverged"] = traj.diverged;
    std::optional<BulkEnvelope> envelope;
    if (params) {
      envelope = voltage_envelope(*params, means.times);
      const auto adm = admissible_network_size(params->x, params->b0, params->b1);
      report["sigma1"] = envelope->sigma1;
      report["sigma2_consistent"] = envelope->sigma2;
      report["sigma2_literal"] = envelope->sigma2_literal;
      report["bounded"] = envelope->bounded;
      report["decoupled_limit"] = envelope->decoupled;
      report["admissible_n_min"] = adm.n_min;
      report["admissible_n_max"] = adm.n_max;
      report["admissible_sizes"] = adm.admissible;
    }
    const auto steady =
        steady_state_deviation_check(traj, sc.model, sc.perturbations, sc.bulk_nodes);
    report["steady_state"] = {{"controlled", steady.controlled},
                              {"omega_bar_measured", steady.omega_bar_measured},
                              {"omega_bar_expected", steady.omega_bar_expected},
                              {"omega_bar_error", steady.omega_bar_error},
                              {"theta_bar_measured", steady.theta_bar_measured},
                              {"theta_bar_expected", steady.theta_bar_expected},
                              {"theta_bar_error", steady.theta_bar_error}};
    if (!sc.notes.empty()) report["notes"] = sc.notes;
    report["nominal_frequency"] = sc.model.nominal_frequency;

    const auto csv_path = out_path(options, sc.name + "_bulk.csv");
    write_bulk_csv(csv_path, means, envelope ? &*envelope : nullptr);
    result.files.push_back(csv_path);
    const auto json_path = out_path(options, sc.name + "_bulk.json");
    write_text_file(json_path, report.dump(2) + "\n");
    result.files.push_back(json_path);
  }

  if (wants(sc, "return-time")) {
    const auto means = bulk_mean_series(traj, sc.bulk_nodes);
    ReturnTimeSpec spec{sc.return_time_window, sc.return_time_tolerance,
                        sc.perturbation_end()};
    const auto rt = return_time(means.e_bar, means.times, spec);
    if (rt_out) *rt_out = rt;
    json report{{"schema_version", 1},
                {"scenario", sc.name},
                {"window_T", spec.characteristic_time},
                {"tolerance_xi", spec.tolerance},
                {"converged", rt.converged},
                {"return_time", rt.return_time},
                {"converged_pointwise", rt.converged_pointwise},
                {"return_time_pointwise", rt.return_time_pointwise}};
    const auto path = out_path(options, sc.name + "_return_time.json");
    write_text_file(path, report.dump(2) + "\n");
    result.files.push_back(path);
  }

  if (wants(sc, "stability")) {
    const auto report = stability_report_json(sc);
    const auto path = out_path(options, sc.name + "_stability.json");
    write_text_file(path, report.dump(2) + "\n");
    result.files.push_back(path);
  }
  return result;
}

std::string gamma_label(double gamma) {
  std::string s = format_double(gamma);
  for (auto& ch : s)
    if (ch == '.') ch = 'p';
  return s;
}

RunResult merge(RunResult into, RunResult from) {
  into.files.insert(into.files.end(), from.files.begin(), from.files.end());
  if (from.numerical_failure && !into.numerical_failure) {
    into.numerical_failure = true;
    into.failure_reason = from.failure_reason;
  }
  return into;
}

RunResult run_sweep(const Scenario& base, const RunOptions& options) {
  // One sub-scenario per gamma; uniform gain override on every node.
  std::vector<Scenario> subs;
  for (double gamma : base.sweep_gamma) {
    Scenario sc = base;
    sc.sweep_gamma.clear();
    sc.name = base.name + "_gamma" + gamma_label(gamma);
    for (auto& nd : sc.model.nodes) nd.secondary_gain = gamma;
    if (!wants(sc, "return-time")) sc.analyses.push_back("return-time");
    subs.push_back(std::move(sc));
  }

  struct SubOutcome {
    RunResult result;
    SweepRow row;
  };
  std::vector<std::future<SubOutcome>> futures;
  for (size_t k = 0; k < subs.size(); ++k) {
    futures.push_back(std::async(std::launch::async, [&, k]() -> SubOutcome {
      SubOutcome outcome;
      ReturnTimeResult rt;
      outcome.result = run_single(subs[k], options, &rt);
      outcome.row = {base.sweep_gamma[k], rt.return_time, rt.converged};
      return outcome;
    }));
  }
  RunResult result;
  std::vector<SweepRow> rows;
  for (auto& f : futures) {
    auto outcome = f.get();
    result = merge(std::move(result), std::move(outcome.result));
    rows.push_back(outcome.row);
  }
  const auto path = out_path(options, base.name + "_return_time.csv");
  write_sweep_csv(path, rows);
  result.files.push_back(path);
  return result;
}

}  // namespace

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  if (!scenario.sweep_gamma.empty()) return run_sweep(scenario, options);
  return run_single(scenario, options);
}

RunResult run_preset(const std::string& name, const RunOptions& options) {
  const auto scenarios = preset_scenarios(name);
  std::vector<std::future<RunResult>> futures;
  for (const auto& sc : scenarios)
    futures.push_back(std::async(std::launch::async,
                                 [&options, sc]() { return run_scenario(sc, options); }));
  RunResult result;
  for (auto& f : futures) result = merge(std::move(result), f.get());
  return result;
}

}  // namespace gridvolt
