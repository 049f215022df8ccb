#include "gridvolt/topology.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gridvolt {

namespace {

void check_spec(const TopologySpec& spec) {
  if (spec.n < 2) throw GridError("topology requires N >= 2, got " + std::to_string(spec.n));
  if (spec.b1 == 0.0) throw GridError("topology requires B1 != 0");
}

}  // namespace

Mat all_to_all_susceptance(const TopologySpec& spec) {
  check_spec(spec);
  Mat b = Mat::Constant(spec.n, spec.n, spec.b1);
  b.diagonal().setConstant(spec.b0);
  return b;
}

StarBusMatrices star_bus_susceptance(const TopologySpec& spec) {
  check_spec(spec);
  const int n = spec.n;
  StarBusMatrices out;
  out.explicit_bus = Mat::Zero(n + 1, n + 1);
  out.explicit_bus.diagonal().setConstant(spec.b0);
  for (int i = 1; i <= n; ++i) {
    out.explicit_bus(0, i) = spec.b1;
    out.explicit_bus(i, 0) = spec.b1;
  }
  // The bus self-term is admittance-consistent: shunt minus the sum of its
  // links. With the machine-style value B0 the voltage subsystem around the
  // synchronous state is linearly unstable for any N with sqrt(N) B1 > 1 - B0,
  // which contradicts the settling behaviour of the controlled case study.
  const double bus_self = spec.b0 - n * spec.b1;
  out.explicit_bus(0, 0) = bus_self;
  if (bus_self == 0.0)
    throw BusEliminationSingular("bus self-susceptance is zero; elimination undefined");
  // Schur complement of the bus entry: B_red = B_ll - b1^2/bus_self * ones.
  const double w = spec.b1 * spec.b1 / bus_self;
  out.kron_reduced = Mat::Constant(n, n, -w);
  out.kron_reduced.diagonal().setConstant(spec.b0 - w);
  return out;
}

const std::vector<double>& heterogeneous_power_values() {
  static const std::vector<double> p = {
      -0.4, 0.53, -0.51, 0.56, 0.52, 0.48, -0.55, -0.45, 0.491, 0.509,
      -0.482, -0.518, -0.46, -0.64, 0.42, 0.58, -0.5, 0.5, 0.35, -0.45};
  return p;
}

Scenario heterogeneous_case_study(const HeterogeneousOptions& options) {
  const auto& p = heterogeneous_power_values();
  const int n = static_cast<int>(p.size());

  TopologySpec topo{TopologySpec::Kind::star_bus, n, -0.8, 1.0};
  const auto mats = star_bus_susceptance(topo);

  auto machine = [&](double power) {
    NodeParams nd;
    nd.power_setpoint = power;
    nd.damping = 0.2 * std::abs(power);
    nd.secondary_gain = options.controlled ? std::abs(power) : 0.0;
    nd.voltage_time_constant = 1.0;
    nd.field_voltage = 1.0;
    nd.reactance_diff = 1.0;
    return nd;
  };

  Scenario sc;
  sc.name = std::string("fig6_") + (options.controlled ? "controlled" : "uncontrolled") +
            (options.explicit_bus ? "" : "_kron");
  sc.notes.push_back(options.explicit_bus
                         ? "bus modeled as explicit zero-power dynamical node with median parameters"
                         : "bus eliminated by passive-node reduction");

  if (options.explicit_bus) {
    // Median |P| sets the bus parameters; the bus carries no power.
    std::vector<double> mags(p.size());
    std::transform(p.begin(), p.end(), mags.begin(), [](double v) { return std::abs(v); });
    std::nth_element(mags.begin(), mags.begin() + n / 2, mags.end());
    double hi = mags[n / 2];
    std::nth_element(mags.begin(), mags.begin() + n / 2 - 1, mags.end());
    const double median = 0.5 * (mags[n / 2 - 1] + hi);

    NodeParams bus = machine(median);
    bus.power_setpoint = 0.0;
    sc.model.nodes.push_back(bus);
    for (double power : p) sc.model.nodes.push_back(machine(power));
    sc.model.susceptance = mats.explicit_bus;
    // Bulk means are taken over the machines only.
    for (int i = 1; i <= n; ++i) sc.bulk_nodes.push_back(i);
  } else {
    for (double power : p) sc.model.nodes.push_back(machine(power));
    sc.model.susceptance = mats.kron_reduced;
  }

  const int total = sc.model.size();
  sc.initial_state.theta = Vec::Zero(total);
  sc.initial_state.omega = Vec::Zero(total);
  sc.initial_state.e = Vec::Constant(total, 1.14);
  // Ramp on the first machine, as in the homogeneous experiments.
  sc.perturbations.push_back({options.explicit_bus ? 1 : 0, 40.0, 42.0, 1.0});
  sc.integrator = IntegratorSettings{0.01, 200.0, 10, 1e6};
  sc.analyses = {"simulate", "bulk"};
  return sc;
}

}  // namespace gridvolt
