#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridvolt/bulk.hpp"
#include "gridvolt/scenario.hpp"

namespace gridvolt {

struct RunOptions {
  std::string out_dir = "out";
  std::optional<double> dt;
  std::optional<double> t_final;
};

struct RunResult {
  std::vector<std::string> files;
  bool numerical_failure = false;
  std::string failure_reason;
};

// Uniform per-node parameters and all-to-all coupling pattern over the bulk
// node subset, when the model has them; sum_p includes fully ramped
// perturbations. Empty when the model is heterogeneous.
std::optional<BulkParams> uniform_bulk_params(const Scenario& scenario);

// Executes the scenario's analyses and writes trajectory CSV, bulk CSV and
// report JSON files under options.out_dir. A sweep scenario (non-empty
// sweep_gamma) expands into one run per gamma plus an aggregate sweep CSV.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options);

// Runs every sub-scenario of a figure preset; independent sub-scenarios run
// concurrently.
RunResult run_preset(const std::string& name, const RunOptions& options);

}  // namespace gridvolt
