#pragma once

#include <vector>

#include "gridvolt/dynamics.hpp"

namespace gridvolt {

// Uniform-parameter inputs to the closed-form bulk expressions.
struct BulkParams {
  double alpha = 0.2;
  double gamma = 0.0;
  int n = 2;
  double sum_p = 0.0;     // sum of P_i*, including any fully ramped perturbation
  double theta_bar_0 = 0.0;
  double omega_bar_0 = 0.0;
  double e_bar_0 = 1.14;  // E_0
  double t_d = 1.0;
  double e_f = 1.0;
  double x = 1.0;
  double b0 = -0.8;
  double b1 = 1.0;
};

struct BulkMeanPoint {
  double theta_bar = 0.0;
  double omega_bar = 0.0;
};

// Mean phase/frequency of the constant-voltage (Kuramoto-with-control) bulk:
// damped-oscillator closed form for gamma > 0 (complex pair handled in real
// form), linear drift plus relaxation for gamma = 0.
BulkMeanPoint analytic_bulk_constant_voltage(const BulkParams& params, double t);

struct BulkEnvelope {
  std::vector<double> times;
  std::vector<double> lower;          // steady-state-consistent bound
  std::vector<double> upper;
  std::vector<double> lower_literal;  // bound exactly as printed (T_d in asymptote)
  std::vector<double> upper_literal;
  double sigma1 = 0.0;
  double sigma2 = 0.0;          // consistency-corrected: -X(B0 - (N-1)B1)
  double sigma2_literal = 0.0;  // as printed: -X(B0 + (N-1)B1)
  bool bounded = false;
  bool decoupled = false;  // X = 0: both bounds collapse to the uncoupled relaxation
};

// Exponential bounds on the mean voltage. Two variants are emitted: the
// literal printed curves (asymptote E_f / (T_d (1 - sigma))) and the
// steady-state-consistent ones (asymptote E_f / (1 - sigma)); containment
// assertions use the consistent variant.
BulkEnvelope voltage_envelope(const BulkParams& params, const std::vector<double>& times);

struct AdmissibleSize {
  double n_min = 0.0;
  double n_max = 0.0;
  std::vector<int> admissible;  // integers N >= 2 inside [n_min, n_max]
};

// Bounded-voltage network sizes: 1 -/+ X(1-B0)/B1.
AdmissibleSize admissible_network_size(double x, double b0, double b1);

struct BulkMeanSeries {
  std::vector<double> times;
  std::vector<double> theta_bar;
  std::vector<double> omega_bar;
  std::vector<double> e_bar;
};

// Arithmetic node-means at each sample; `nodes` selects the subset entering
// the mean (empty = all), used to exclude a passive bus.
BulkMeanSeries bulk_mean_series(const Trajectory& trajectory,
                                const std::vector<int>& nodes = {});

}  // namespace gridvolt
