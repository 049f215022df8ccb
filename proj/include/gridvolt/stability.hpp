#pragma once

#include <complex>
#include <string>
#include <vector>

#include "gridvolt/model.hpp"

namespace gridvolt {

// Synchronous operating point of the reduced model (omega identically zero).
struct FixedPoint {
  Vec theta_star;
  Vec e_star;
  double residual_norm = 0.0;
  int iterations = 0;
};

// Block structure of the linearization around a fixed point.
//
// P is the (symmetric, Laplacian-like) phase-coupling matrix, Lambda the
// phase/voltage cross-coupling, C the cosine-weighted susceptance. The full
// Jacobian is assembled block-wise as
//   [ 0            I    0              ]
//   [ -(P+Gamma)  -A    Lambda^T       ]
//   [ T^-1 chi Lambda  0  T^-1 (chi C - I) ]
// which matches central finite differences of the reduced right-hand side
// entrywise (the sign/argument conventions of Lambda are fixed so both
// occurrences are exact derivatives; Lambda has zero row sums).
struct LinearizationBlocks {
  Mat p;        // N x N, symmetric
  Mat lambda;   // N x N
  Mat c;        // N x N
  Mat gamma;    // diagonal of gamma_i
  Mat a_damping;  // diagonal of alpha_i
  Mat chi;      // diagonal of X_i
  Mat t_inv;    // diagonal of 1/T_d,i
  Mat j;        // 3N x 3N
};

enum class Verdict { stable, unstable, marginal };

struct StabilityReport {
  std::vector<std::complex<double>> eigenvalues;  // all 3N
  double spectral_abscissa_excl_gauge = 0.0;
  bool gauge_mode_present = false;
  std::complex<double> gauge_eigenvalue{0.0, 0.0};
  bool proposition_condition_1 = false;
  bool proposition_condition_2 = false;
  Verdict verdict = Verdict::marginal;
};

std::string to_string(Verdict verdict);

struct NewtonOptions {
  double tolerance = 1e-10;  // on the residual norm
  int max_iterations = 100;
};

// Damped Newton on the 2N synchronous-state residuals (omega-dot equation at
// omega = 0 and the voltage equation). When every gamma_i = 0 the phase gauge
// is fixed by appending the constraint sum(theta) = sum(theta_guess).
// Throws NewtonDiverged or SingularJacobianAtIterate.
FixedPoint find_fixed_point(const GridModel& model, const Vec& theta_guess,
                            const Vec& e_guess, const NewtonOptions& options = {});

LinearizationBlocks build_linearization(const GridModel& model, const FixedPoint& fp);

struct SpectralOptions {
  double abscissa_tolerance = 1e-9;     // dead zone around zero -> marginal
  double gauge_angle_tolerance = 1e-6;  // eigenvector alignment [rad]
};

// Full spectrum of J. When gamma_all_zero, the gauge eigenvalue (smallest
// magnitude with eigenvector aligned to the global-phase direction) is
// excluded from the abscissa.
StabilityReport spectral_stability(const LinearizationBlocks& blocks, bool gamma_all_zero,
                                   const SpectralOptions& options = {});

struct PropositionDetails {
  bool condition_1 = false;
  bool condition_2 = false;
  double condition_1_min_eigenvalue = 0.0;  // of Q^T (P+Gamma) Q
  double condition_2_max_eigenvalue = 0.0;  // of sym(C - chi^-1 + Lambda P+ Lambda^T)
};

// Proposition I: (1) P+Gamma positive definite on the subspace orthogonal to
// the all-ones phase vector; (2) C - chi^-1 + Lambda P+ Lambda^T negative
// definite, with P+ the Moore-Penrose pseudo-inverse of symmetric P.
// Throws AsymmetricPInput when P is not symmetric within tolerance.
PropositionDetails proposition_one_check(const LinearizationBlocks& blocks,
                                         double tolerance = 1e-9,
                                         double pinv_cutoff = 1e-10);

// Moore-Penrose pseudo-inverse of a symmetric matrix via spectral
// decomposition; eigenvalues below cutoff * max|eig| are treated as zero.
Mat symmetric_pseudo_inverse(const Mat& m, double cutoff = 1e-10);

struct ShiftCheckResult {
  bool passed = false;
  double max_deviation = 0.0;
  Vec shifted_spectrum;  // sorted eigenvalues of A + gamma*I
};

// Verifies that the sorted spectrum of A + gamma*I equals the sorted spectrum
// of A shifted by gamma, within 1e-10.
ShiftCheckResult eigen_shift_check(const Mat& a, double gamma, double tolerance = 1e-10);

}  // namespace gridvolt
