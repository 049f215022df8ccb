#include "gridvolt/presets.hpp"

#include "gridvolt/topology.hpp"

namespace gridvolt {

Scenario homogeneous_scenario(const std::string& name, const HomogeneousSpec& spec) {
  Scenario sc;
  sc.name = name;
  sc.model.susceptance =
      all_to_all_susceptance({TopologySpec::Kind::all_to_all, spec.n, spec.b0, spec.b1});
  sc.model.nodes.resize(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    NodeParams nd;
    nd.power_setpoint = (i % 2 == 0) ? spec.power_magnitude : -spec.power_magnitude;
    nd.damping = spec.alpha;
    nd.secondary_gain = spec.gamma;
    nd.voltage_time_constant = spec.t_d;
    nd.field_voltage = spec.e_f;
    nd.reactance_diff = spec.x;
    sc.model.nodes[i] = nd;
  }
  sc.initial_state.theta = Vec::Zero(spec.n);
  sc.initial_state.omega = Vec::Zero(spec.n);
  sc.initial_state.e = Vec::Constant(spec.n, spec.e0);
  sc.integrator = IntegratorSettings{0.01, 200.0, 10, 1e6};
  sc.analyses = {"simulate", "bulk"};
  return sc;
}

namespace {

std::string gamma_tag(double gamma) {
  std::string s = std::to_string(gamma);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  for (auto& ch : s)
    if (ch == '.') ch = 'p';
  return s;
}

std::vector<Scenario> two_node_pair(const std::string& base, double p_dist) {
  std::vector<Scenario> out;
  for (double gamma : {0.0, 1.0}) {
    HomogeneousSpec spec;
    spec.gamma = gamma;
    Scenario sc = homogeneous_scenario(base + "_gamma" + gamma_tag(gamma), spec);
    if (p_dist != 0.0) sc.perturbations.push_back({0, 40.0, 42.0, p_dist});
    out.push_back(std::move(sc));
  }
  return out;
}

std::vector<Scenario> bulk_family(const std::string& base, double gamma) {
  std::vector<Scenario> out;
  for (int n : {2, 10, 20, 50}) {
    HomogeneousSpec spec;
    spec.n = n;
    spec.gamma = gamma;
    spec.t_d = 1.0;
    Scenario sc = homogeneous_scenario(base + "_n" + std::to_string(n), spec);
    sc.perturbations.push_back({0, 40.0, 42.0, 1.0});
    out.push_back(std::move(sc));
  }
  return out;
}

}  // namespace

std::vector<Scenario> preset_scenarios(const std::string& name) {
  if (name == "fig1") return two_node_pair("fig1", 0.0);
  if (name == "fig2") return two_node_pair("fig2", 1.0);
  if (name == "fig3") return bulk_family("fig3", 0.0);
  if (name == "fig4") return bulk_family("fig4", 1.0);
  if (name == "fig5") {
    HomogeneousSpec spec;
    Scenario sc = homogeneous_scenario("fig5", spec);
    sc.perturbations.push_back({0, 40.0, 42.0, -1.0});
    sc.integrator.t_final = 300.0;
    sc.analyses = {"return-time"};
    sc.sweep_gamma = {0.25, 0.5, 1.0, 2.0, 4.0};
    // Threshold sized to the strong-control response: at gamma = 4 the mean
    // voltage never leaves the tolerance band, so the return time reaches 0.
    sc.return_time_tolerance = 2e-2;
    return {sc};
  }
  if (name == "fig6") {
    return {heterogeneous_case_study({true, true}),
            heterogeneous_case_study({false, true})};
  }
  throw UnknownPreset("unknown preset '" + name + "' (expected fig1..fig6)");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig1", "fig2", "fig3",
                                              "fig4", "fig5", "fig6"};
  return names;
}

}  // namespace gridvolt
