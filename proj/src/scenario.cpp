#include "gridvolt/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "gridvolt/topology.hpp"
#include "json.hpp"

namespace gridvolt {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

// Scalar-or-array per-node value with broadcast.
Vec node_values(const json& nodes, const std::string& key, int n, double fallback) {
  if (!nodes.contains(key)) return Vec::Constant(n, fallback);
  const auto& v = nodes.at(key);
  if (v.is_number()) return Vec::Constant(n, v.get<double>());
  if (v.is_array()) {
    if (static_cast<int>(v.size()) != n)
      throw ConfigParseError("model.nodes." + key + " has " + std::to_string(v.size()) +
                             " entries, expected " + std::to_string(n));
    Vec out(n);
    for (int i = 0; i < n; ++i) out[i] = v.at(i).get<double>();
    return out;
  }
  throw ConfigParseError("model.nodes." + key + " must be a number or an array");
}

Mat parse_susceptance(const json& m) {
  if (m.contains("susceptance")) {
    const auto& rows = m.at("susceptance");
    const int n = static_cast<int>(rows.size());
    Mat b(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows.at(i).size()) != n)
        throw ConfigParseError("model.susceptance must be square");
      for (int j = 0; j < n; ++j) b(i, j) = rows.at(i).at(j).get<double>();
    }
    return b;
  }
  if (!m.contains("topology"))
    throw ConfigParseError("model requires either a topology block or a susceptance matrix");
  const auto& t = m.at("topology");
  TopologySpec spec;
  const std::string kind = t.at("kind").get<std::string>();
  spec.n = t.at("n").get<int>();
  spec.b0 = t.value("b0", -0.8);
  spec.b1 = t.value("b1", 1.0);
  if (kind == "all_to_all") {
    spec.kind = TopologySpec::Kind::all_to_all;
    return all_to_all_susceptance(spec);
  }
  if (kind == "star_bus") {
    spec.kind = TopologySpec::Kind::star_bus;
    const auto mats = star_bus_susceptance(spec);
    const std::string bus = t.value("bus", "explicit");
    if (bus == "explicit") return mats.explicit_bus;
    if (bus == "kron") return mats.kron_reduced;
    throw ConfigParseError("model.topology.bus must be 'explicit' or 'kron'");
  }
  throw ConfigParseError("model.topology.kind must be 'all_to_all' or 'star_bus'");
}

json susceptance_to_json(const Mat& b) {
  json rows = json::array();
  for (int i = 0; i < b.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < b.cols(); ++j) row.push_back(b(i, j));
    rows.push_back(row);
  }
  return rows;
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec state_values(const json& state, const std::string& key, int n, double fallback) {
  return node_values(state, key, n, fallback);
}

Scenario parse(const json& j) {
  Scenario sc;
  if (j.value("schema_version", 0) != kSchemaVersion)
    throw ConfigParseError("missing or unsupported schema_version (expected " +
                           std::to_string(kSchemaVersion) + ")");
  sc.name = j.value("name", "scenario");

  const auto& m = j.at("model");
  sc.model.susceptance = parse_susceptance(m);
  const int n = static_cast<int>(sc.model.susceptance.rows());
  const json nodes = m.value("nodes", json::object());
  const Vec power = node_values(nodes, "power", n, 0.0);
  const Vec alpha = node_values(nodes, "alpha", n, 0.2);
  const Vec gamma = node_values(nodes, "gamma", n, 0.0);
  const Vec t_d = node_values(nodes, "t_d", n, 1.0);
  const Vec e_f = node_values(nodes, "e_f", n, 1.0);
  const Vec x = node_values(nodes, "x", n, 1.0);
  const Vec tau_g = node_values(nodes, "tau_g", n, 0.0);
  const Vec beta = node_values(nodes, "beta", n, 0.0);
  sc.model.nodes.resize(n);
  for (int i = 0; i < n; ++i)
    sc.model.nodes[i] = NodeParams{power[i], alpha[i], gamma[i], t_d[i],
                                   e_f[i],  x[i],     tau_g[i], beta[i]};
  sc.model.nominal_frequency = m.value("nominal_frequency", 50.0);

  const json init = j.value("initial_state", json::object());
  sc.initial_state.theta = state_values(init, "theta", n, 0.0);
  sc.initial_state.omega = state_values(init, "omega", n, 0.0);
  sc.initial_state.e = state_values(init, "e", n, 1.0);
  if (init.contains("u")) sc.initial_state.u = state_values(init, "u", n, 0.0);

  for (const auto& p : j.value("perturbations", json::array())) {
    Perturbation pert;
    pert.node = p.at("node").get<int>();
    pert.t_start = p.at("t_start").get<double>();
    pert.t_end = p.at("t_end").get<double>();
    pert.delta_p = p.at("delta_p").get<double>();
    sc.perturbations.push_back(pert);
  }

  const json integ = j.value("integrator", json::object());
  sc.integrator.dt = integ.value("dt", 0.01);
  sc.integrator.t_final = integ.value("t_final", 200.0);
  sc.integrator.sample_stride = integ.value("sample_stride", 10);
  sc.integrator.blowup_bound = integ.value("blowup_bound", 1e6);

  sc.constant_voltage = j.value("constant_voltage", false);
  sc.use_full_model = j.value("full_model", false);
  if (j.contains("analyses"))
    sc.analyses = j.at("analyses").get<std::vector<std::string>>();
  if (j.contains("bulk_nodes"))
    sc.bulk_nodes = j.at("bulk_nodes").get<std::vector<int>>();
  const json rt = j.value("return_time", json::object());
  sc.return_time_window = rt.value("window", 5.0);
  sc.return_time_tolerance = rt.value("tolerance", 1e-4);
  if (j.contains("sweep_gamma"))
    sc.sweep_gamma = j.at("sweep_gamma").get<std::vector<double>>();
  if (j.contains("notes")) sc.notes = j.at("notes").get<std::vector<std::string>>();
  return sc;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    Scenario sc = parse(j);
    validate_scenario(sc);
    return sc;
  } catch (const json::exception& e) {
    throw ConfigParseError(std::string("invalid scenario config: ") + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& sc) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = sc.name;
  json m;
  m["susceptance"] = susceptance_to_json(sc.model.susceptance);
  json nodes;
  nodes["power"] = vec_to_json(sc.model.power());
  nodes["alpha"] = vec_to_json(sc.model.alpha());
  nodes["gamma"] = vec_to_json(sc.model.gamma());
  nodes["t_d"] = vec_to_json(sc.model.t_d());
  nodes["e_f"] = vec_to_json(sc.model.e_f());
  nodes["x"] = vec_to_json(sc.model.x());
  nodes["tau_g"] = vec_to_json(sc.model.tau_g());
  nodes["beta"] = vec_to_json(sc.model.beta());
  m["nodes"] = nodes;
  m["nominal_frequency"] = sc.model.nominal_frequency;
  j["model"] = m;
  json init;
  init["theta"] = vec_to_json(sc.initial_state.theta);
  init["omega"] = vec_to_json(sc.initial_state.omega);
  init["e"] = vec_to_json(sc.initial_state.e);
  if (sc.initial_state.has_u()) init["u"] = vec_to_json(sc.initial_state.u);
  j["initial_state"] = init;
  json perts = json::array();
  for (const auto& p : sc.perturbations)
    perts.push_back({{"node", p.node},
                     {"t_start", p.t_start},
                     {"t_end", p.t_end},
                     {"delta_p", p.delta_p}});
  j["perturbations"] = perts;
  j["integrator"] = {{"dt", sc.integrator.dt},
                     {"t_final", sc.integrator.t_final},
                     {"sample_stride", sc.integrator.sample_stride},
                     {"blowup_bound", sc.integrator.blowup_bound}};
  j["constant_voltage"] = sc.constant_voltage;
  j["full_model"] = sc.use_full_model;
  j["analyses"] = sc.analyses;
  if (!sc.bulk_nodes.empty()) j["bulk_nodes"] = sc.bulk_nodes;
  j["return_time"] = {{"window", sc.return_time_window},
                      {"tolerance", sc.return_time_tolerance}};
  if (!sc.sweep_gamma.empty()) j["sweep_gamma"] = sc.sweep_gamma;
  if (!sc.notes.empty()) j["notes"] = sc.notes;
  return j.dump(2) + "\n";
}

const Scenario& validate_scenario(const Scenario& sc) {
  try {
    validate_model(sc.model);
  } catch (const GridError& e) {
    throw ConfigParseError("scenario '" + sc.name + "': invalid model: " + e.what());
  }
  const int n = sc.model.size();
  if (sc.analyses.empty()) throw ConfigParseError("analysis list must be non-empty");
  static const std::set<std::string> known{"simulate", "stability", "bulk", "return-time"};
  for (const auto& a : sc.analyses)
    if (!known.count(a)) throw ConfigParseError("unknown analysis '" + a + "'");
  for (size_t k = 0; k < sc.perturbations.size(); ++k) {
    const auto& p = sc.perturbations[k];
    if (p.node < 0 || p.node >= n)
      throw ConfigParseError("perturbation " + std::to_string(k) + " references node " +
                             std::to_string(p.node) + " outside the model");
    if (!(p.t_end > p.t_start))
      throw ConfigParseError("perturbation " + std::to_string(k) +
                             " requires t_end > t_start");
  }
  for (int i : sc.bulk_nodes)
    if (i < 0 || i >= n)
      throw ConfigParseError("bulk_nodes references node " + std::to_string(i));
  if (sc.initial_state.theta.size() != n || sc.initial_state.omega.size() != n ||
      sc.initial_state.e.size() != n)
    throw ConfigParseError("initial state dimension does not match the model");
  return sc;
}

}  // namespace gridvolt
