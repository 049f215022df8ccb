#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridvolt/dynamics.hpp"
#include "gridvolt/model.hpp"

namespace gridvolt {

// One self-contained experiment: model, initial state, perturbation schedule,
// integrator settings and the analyses to run on the result.
struct Scenario {
  std::string name;
  GridModel model;
  SimState initial_state;
  std::vector<Perturbation> perturbations;
  IntegratorSettings integrator;
  bool constant_voltage = false;
  bool use_full_model = false;
  std::vector<std::string> analyses{"simulate"};  // simulate|stability|bulk|return-time

  // Nodes entering bulk means; empty means all. Used to exclude a passive bus.
  std::vector<int> bulk_nodes;

  // Return-time criterion parameters (defaults resolve the gamma sweep).
  double return_time_window = 5.0;    // characteristic time T [s]
  double return_time_tolerance = 1e-4;  // xi

  // Gamma values for the `sweep` subcommand; empty otherwise.
  std::vector<double> sweep_gamma;

  // Free-form provenance notes carried into report metadata.
  std::vector<std::string> notes;

  [[nodiscard]] double perturbation_end() const {
    double t = 0.0;
    for (const auto& p : perturbations) t = std::max(t, p.t_end);
    return t;
  }
};

// Throws ConfigParseError with key context on malformed input.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& scenario);
const Scenario& validate_scenario(const Scenario& scenario);

}  // namespace gridvolt
