#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gridvolt/presets.hpp"
#include "gridvolt/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int finish(const gridvolt::RunResult& result) {
  for (const auto& f : result.files) std::cout << "wrote " << f << "\n";
  if (result.numerical_failure) {
    std::cerr << "numerical failure: " << result.failure_reason << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

// Restricts a config-driven run to one analysis (the subcommand's).
gridvolt::Scenario with_analysis(gridvolt::Scenario sc, const std::string& analysis) {
  sc.analyses = {analysis};
  return sc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synchronous-machine network simulation and stability analysis"};
  app.require_subcommand(1);
  app.fallthrough();  // accept --out-dir/--dt/--t-final after the subcommand too

  gridvolt::RunOptions options;
  double dt = 0.0, t_final = 0.0;
  app.add_option("--out-dir", options.out_dir, "Output directory")
      ->capture_default_str();
  auto* dt_opt = app.add_option("--dt", dt, "Override the integrator step [s]");
  auto* tf_opt = app.add_option("--t-final", t_final, "Override the run length [s]");

  std::string config_path, preset_name;
  auto* simulate = app.add_subcommand("simulate", "Integrate a scenario and write the trajectory CSV");
  simulate->add_option("config", config_path, "Scenario config (JSON)")->required();
  auto* stability = app.add_subcommand("stability", "Fixed point, spectrum and Proposition-I report");
  stability->add_option("config", config_path, "Scenario config (JSON)")->required();
  auto* bulk = app.add_subcommand("bulk", "Mean series, voltage envelope and admissible-size report");
  bulk->add_option("config", config_path, "Scenario config (JSON)")->required();
  auto* return_time = app.add_subcommand("return-time", "Lag-T relaxation time of the mean voltage");
  return_time->add_option("config", config_path, "Scenario config (JSON)")->required();
  auto* sweep = app.add_subcommand("sweep", "Gamma sweep driven by the config's sweep_gamma list");
  sweep->add_option("config", config_path, "Scenario config (JSON)")->required();
  auto* preset = app.add_subcommand("preset", "Run a built-in figure experiment (fig1..fig6)");
  preset->add_option("name", preset_name, "Preset name")->required();
  auto* run = app.add_subcommand("run", "Run every analysis listed in the config");
  run->add_option("config", config_path, "Scenario config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (*dt_opt) options.dt = dt;
  if (*tf_opt) options.t_final = t_final;

  try {
    if (*preset) return finish(gridvolt::run_preset(preset_name, options));

    gridvolt::Scenario sc = gridvolt::load_scenario(config_path);
    if (*simulate) sc = with_analysis(sc, "simulate");
    if (*stability) sc = with_analysis(sc, "stability");
    if (*bulk) sc = with_analysis(sc, "bulk");
    if (*return_time) sc = with_analysis(sc, "return-time");
    if (*sweep && sc.sweep_gamma.empty())
      throw gridvolt::ConfigParseError("sweep requires a non-empty sweep_gamma list");
    if (!*sweep) sc.sweep_gamma.clear();
    return finish(gridvolt::run_scenario(sc, options));
  } catch (const gridvolt::ConfigParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const gridvolt::UnknownPreset& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const gridvolt::IoFailure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const gridvolt::GridError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
