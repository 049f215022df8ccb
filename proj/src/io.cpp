#include "gridvolt/io.hpp"

#include <cstdio>
#include <fstream>

namespace gridvolt {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot open output file: " + path);
  return out;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  auto out = open_out(path);
  out << "t";
  for (int i = 1; i <= traj.n; ++i) out << ",theta_" << i;
  for (int i = 1; i <= traj.n; ++i) out << ",omega_" << i;
  for (int i = 1; i <= traj.n; ++i) out << ",E_" << i;
  if (traj.has_u)
    for (int i = 1; i <= traj.n; ++i) out << ",u_" << i;
  out << "\n";
  for (int k = 0; k < traj.samples(); ++k) {
    out << format_double(traj.times[k]);
    for (int c = 0; c < traj.states.cols(); ++c)
      out << ',' << format_double(traj.states(k, c));
    out << "\n";
  }
  if (!out) throw IoFailure("write failed: " + path);
}

void write_bulk_csv(const std::string& path, const BulkMeanSeries& means,
                    const BulkEnvelope* envelope) {
  auto out = open_out(path);
  out << "t,theta_bar,omega_bar,E_bar";
  if (envelope) out << ",env_lower,env_upper";
  out << "\n";
  for (size_t k = 0; k < means.times.size(); ++k) {
    out << format_double(means.times[k]) << ',' << format_double(means.theta_bar[k])
        << ',' << format_double(means.omega_bar[k]) << ','
        << format_double(means.e_bar[k]);
    if (envelope)
      out << ',' << format_double(envelope->lower[k]) << ','
          << format_double(envelope->upper[k]);
    out << "\n";
  }
  if (!out) throw IoFailure("write failed: " + path);
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  auto out = open_out(path);
  out << "gamma,return_time,converged\n";
  for (const auto& r : rows)
    out << format_double(r.gamma) << ',' << format_double(r.return_time) << ','
        << (r.converged ? 1 : 0) << "\n";
  if (!out) throw IoFailure("write failed: " + path);
}

void write_text_file(const std::string& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
  if (!out) throw IoFailure("write failed: " + path);
}

}  // namespace gridvolt
