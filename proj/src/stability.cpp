#include "gridvolt/stability.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gridvolt {

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::stable: return "stable";
    case Verdict::unstable: return "unstable";
    case Verdict::marginal: return "marginal";
  }
  return "marginal";
}

namespace {

struct CouplingBlocks {
  Mat p;       // phase coupling, symmetric
  Mat lambda;  // phase/voltage cross coupling, zero row sums
  Mat c;       // cosine-weighted susceptance
};

CouplingBlocks coupling_blocks(const Vec& theta, const Vec& e, const Mat& b) {
  const int n = static_cast<int>(theta.size());
  CouplingBlocks out;
  out.p = Mat::Zero(n, n);
  out.lambda = Mat::Zero(n, n);
  out.c = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double p_diag = 0.0;
    double lam_diag = 0.0;
    for (int j = 0; j < n; ++j) {
      const double cij = std::cos(theta[i] - theta[j]);
      const double sij = std::sin(theta[i] - theta[j]);
      out.c(i, j) = b(i, j) * cij;
      if (i == j) continue;
      out.p(i, j) = -e[i] * b(i, j) * e[j] * cij;
      out.lambda(i, j) = e[j] * b(i, j) * sij;
      p_diag += e[i] * b(i, j) * e[j] * cij;
      lam_diag -= e[j] * b(i, j) * sij;
    }
    out.p(i, i) = p_diag;
    out.lambda(i, i) = lam_diag;
  }
  return out;
}

// Synchronous-state residual of the reduced model: the omega-dot equation at
// omega = 0 stacked over the (un-scaled) voltage equation.
Vec fixed_point_residual(const GridModel& model, const Vec& theta, const Vec& e) {
  const int n = model.size();
  const Mat& b = model.susceptance;
  Vec r(2 * n);
  for (int i = 0; i < n; ++i) {
    double flow = 0.0;
    double volt = 0.0;
    for (int j = 0; j < n; ++j) {
      flow += e[i] * b(i, j) * e[j] * std::sin(theta[i] - theta[j]);
      volt += b(i, j) * e[j] * std::cos(theta[i] - theta[j]);
    }
    const auto& nd = model.nodes[i];
    r[i] = -nd.secondary_gain * theta[i] + nd.power_setpoint - flow;
    r[n + i] = nd.field_voltage - e[i] + nd.reactance_diff * volt;
  }
  return r;
}

}  // namespace

FixedPoint find_fixed_point(const GridModel& model, const Vec& theta_guess,
                            const Vec& e_guess, const NewtonOptions& options) {
  const int n = model.size();
  if (theta_guess.size() != n || e_guess.size() != n)
    throw DimensionMismatch("fixed-point guess dimension does not match model");
  const bool gauge = model.gamma_all_zero();
  const double theta_sum_target = theta_guess.sum();
  const int rows = gauge ? 2 * n + 1 : 2 * n;

  auto residual = [&](const Vec& theta, const Vec& e) {
    Vec r(rows);
    r.head(2 * n) = fixed_point_residual(model, theta, e);
    if (gauge) r[2 * n] = theta.sum() - theta_sum_target;
    return r;
  };

  Vec theta = theta_guess;
  Vec e = e_guess;
  Vec r = residual(theta, e);

  for (int it = 0; it < options.max_iterations; ++it) {
    const double rnorm = r.norm();
    if (rnorm < options.tolerance) {
      return FixedPoint{theta, e, rnorm, it};
    }

    const auto cb = coupling_blocks(theta, e, model.susceptance);
    Mat jac = Mat::Zero(rows, 2 * n);
    jac.block(0, 0, n, n) = -(cb.p + Mat(model.gamma().asDiagonal()));
    jac.block(0, n, n, n) = cb.lambda.transpose();
    jac.block(n, 0, n, n) = model.x().asDiagonal() * cb.lambda;
    jac.block(n, n, n, n) = model.x().asDiagonal() * cb.c - Mat::Identity(n, n);
    if (gauge) jac.row(2 * n).head(n).setOnes();

    Eigen::ColPivHouseholderQR<Mat> qr(jac);
    qr.setThreshold(1e-12);
    if (qr.rank() < 2 * n)
      throw SingularJacobianAtIterate("rank-deficient Jacobian at Newton iterate " +
                                      std::to_string(it));
    const Vec step = qr.solve(-r);

    // Backtracking line search on the residual norm.
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      const Vec theta_new = theta + t * step.head(n);
      const Vec e_new = e + t * step.tail(n);
      const Vec r_new = residual(theta_new, e_new);
      if (r_new.norm() < (1.0 - 1e-4 * t) * rnorm) {
        theta = theta_new;
        e = e_new;
        r = r_new;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted)
      throw NewtonDiverged("no residual decrease at iterate " + std::to_string(it) +
                           ", residual " + std::to_string(rnorm));
  }
  throw NewtonDiverged("iteration cap reached, residual " + std::to_string(r.norm()));
}

LinearizationBlocks build_linearization(const GridModel& model, const FixedPoint& fp) {
  const int n = model.size();
  const auto cb = coupling_blocks(fp.theta_star, fp.e_star, model.susceptance);

  LinearizationBlocks out;
  out.p = cb.p;
  out.lambda = cb.lambda;
  out.c = cb.c;
  out.gamma = model.gamma().asDiagonal();
  out.a_damping = model.alpha().asDiagonal();
  out.chi = model.x().asDiagonal();
  out.t_inv = model.t_d().cwiseInverse().asDiagonal();

  out.j = Mat::Zero(3 * n, 3 * n);
  out.j.block(0, n, n, n) = Mat::Identity(n, n);
  out.j.block(n, 0, n, n) = -(cb.p + out.gamma);
  out.j.block(n, n, n, n) = -out.a_damping;
  out.j.block(n, 2 * n, n, n) = cb.lambda.transpose();
  out.j.block(2 * n, 0, n, n) = out.t_inv * out.chi * cb.lambda;
  out.j.block(2 * n, 2 * n, n, n) = out.t_inv * (out.chi * cb.c - Mat::Identity(n, n));
  return out;
}

StabilityReport spectral_stability(const LinearizationBlocks& blocks, bool gamma_all_zero,
                                   const SpectralOptions& options) {
  const int dim = static_cast<int>(blocks.j.rows());
  const int n = dim / 3;
  Eigen::EigenSolver<Mat> solver(blocks.j);
  if (solver.info() != Eigen::Success)
    throw EigensolverFailure("eigensolver did not converge on the 3N Jacobian");

  StabilityReport report;
  report.eigenvalues.reserve(dim);
  for (int k = 0; k < dim; ++k) report.eigenvalues.push_back(solver.eigenvalues()[k]);

  // Global-phase direction (1...1, 0, 0) / sqrt(N).
  int gauge_index = -1;
  if (gamma_all_zero) {
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(dim);
    for (int i = 0; i < n; ++i) g[i] = 1.0 / std::sqrt(double(n));
    double best_mag = std::numeric_limits<double>::infinity();
    for (int k = 0; k < dim; ++k) {
      const Eigen::VectorXcd v = solver.eigenvectors().col(k);
      const double align = std::abs(g.dot(v)) / v.norm();
      const double angle = std::acos(std::min(1.0, align));
      if (angle < options.gauge_angle_tolerance &&
          std::abs(solver.eigenvalues()[k]) < best_mag) {
        best_mag = std::abs(solver.eigenvalues()[k]);
        gauge_index = k;
      }
    }
  }
  report.gauge_mode_present = gauge_index >= 0;
  if (gauge_index >= 0) report.gauge_eigenvalue = solver.eigenvalues()[gauge_index];

  double abscissa = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < dim; ++k) {
    if (k == gauge_index) continue;
    abscissa = std::max(abscissa, solver.eigenvalues()[k].real());
  }
  report.spectral_abscissa_excl_gauge = abscissa;
  if (abscissa < -options.abscissa_tolerance)
    report.verdict = Verdict::stable;
  else if (abscissa > options.abscissa_tolerance)
    report.verdict = Verdict::unstable;
  else
    report.verdict = Verdict::marginal;
  return report;
}

Mat symmetric_pseudo_inverse(const Mat& m, double cutoff) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (m + m.transpose()));
  if (solver.info() != Eigen::Success)
    throw EigensolverFailure("symmetric eigensolver failed in pseudo-inverse");
  const Vec& ev = solver.eigenvalues();
  const double threshold = cutoff * ev.cwiseAbs().maxCoeff();
  Vec inv = Vec::Zero(ev.size());
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev[i]) > threshold) inv[i] = 1.0 / ev[i];
  return solver.eigenvectors() * inv.asDiagonal() * solver.eigenvectors().transpose();
}

PropositionDetails proposition_one_check(const LinearizationBlocks& blocks,
                                         double tolerance, double pinv_cutoff) {
  const int n = static_cast<int>(blocks.p.rows());
  const double asym = (blocks.p - blocks.p.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * (1.0 + blocks.p.cwiseAbs().maxCoeff()))
    throw AsymmetricPInput("P is not symmetric; max asymmetry " + std::to_string(asym));

  // Orthonormal basis of the subspace orthogonal to the all-ones vector.
  Mat ones = Mat::Ones(n, 1);
  Eigen::HouseholderQR<Mat> qr(ones);
  Mat q_full = qr.householderQ();
  Mat q = q_full.rightCols(n - 1);

  PropositionDetails out;
  {
    const Mat projected = q.transpose() * (blocks.p + blocks.gamma) * q;
    Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (projected + projected.transpose()));
    out.condition_1_min_eigenvalue = solver.eigenvalues().minCoeff();
    out.condition_1 = out.condition_1_min_eigenvalue > tolerance;
  }
  {
    for (int i = 0; i < n; ++i)
      if (blocks.chi(i, i) == 0.0)
        throw GridError("condition 2 undefined: node " + std::to_string(i) + " has X = 0");
    const Mat p_pinv = symmetric_pseudo_inverse(blocks.p, pinv_cutoff);
    Mat m = blocks.c - Mat(blocks.chi).inverse() +
            blocks.lambda * p_pinv * blocks.lambda.transpose();
    m = 0.5 * (m + m.transpose());  // Lambda P+ Lambda^T is symmetric up to rounding
    Eigen::SelfAdjointEigenSolver<Mat> solver(m);
    out.condition_2_max_eigenvalue = solver.eigenvalues().maxCoeff();
    out.condition_2 = out.condition_2_max_eigenvalue < -tolerance;
  }
  return out;
}

ShiftCheckResult eigen_shift_check(const Mat& a, double gamma, double tolerance) {
  Eigen::SelfAdjointEigenSolver<Mat> base(a, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Mat> shifted(
      Mat(a + gamma * Mat::Identity(a.rows(), a.cols())), Eigen::EigenvaluesOnly);
  ShiftCheckResult out;
  out.shifted_spectrum = shifted.eigenvalues();
  out.max_deviation =
      (shifted.eigenvalues() - (base.eigenvalues().array() + gamma).matrix())
          .cwiseAbs()
          .maxCoeff();
  out.passed = out.max_deviation < tolerance;
  return out;
}

}  // namespace gridvolt
