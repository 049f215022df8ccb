#pragma once

#include <string>
#include <vector>

#include "gridvolt/bulk.hpp"
#include "gridvolt/dynamics.hpp"

namespace gridvolt {

// Trajectory CSV: `t, theta_1..N, omega_1..N, E_1..N[, u_1..N]`, headers
// mandatory, doubles written with full round-trip precision.
void write_trajectory_csv(const std::string& path, const Trajectory& trajectory);

// Bulk mean series CSV: `t, theta_bar, omega_bar, E_bar[, env_lower, env_upper]`.
void write_bulk_csv(const std::string& path, const BulkMeanSeries& means,
                    const BulkEnvelope* envelope = nullptr);

struct SweepRow {
  double gamma = 0.0;
  double return_time = 0.0;
  bool converged = false;
};

// Return-time sweep CSV: `gamma, return_time, converged`.
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

void write_text_file(const std::string& path, const std::string& content);

std::string format_double(double v);

}  // namespace gridvolt
