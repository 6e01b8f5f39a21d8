#include "ehl/config.hpp"

#include "ehl/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace ehl {

using nlohmann::json;

namespace {

const std::set<std::string> kScenarios = {"cylinder_on_flat", "pin_on_plane", "stribeck_sweep",
                                          "custom_mesh"};

json to_json(const ScenarioConfig& c) {
  const auto& g = c.geometry;
  const auto& s = c.solver;
  const auto& p = c.pin;
  const auto& y = c.cylinder;
  const auto& u = c.custom;
  json j;
  j["scenario"] = c.scenario;
  j["output_dir"] = c.output_dir;
  j["geometry"] = {{"radius", g.radius},         {"height", g.height},
                   {"length", g.length},         {"n_surf", g.n_surf},
                   {"n_height", g.n_height},     {"wall_thickness", g.wall_thickness},
                   {"n_circ", g.n_circ},         {"n_thick", g.n_thick},
                   {"clearance", g.clearance},   {"mesh_file", g.mesh_file}};
  j["material"] = {{"young_modulus", c.material.young_modulus},
                   {"poisson_ratio", c.material.poisson_ratio},
                   {"density", c.material.density}};
  j["fluid"] = {{"eta", c.fluid.eta},
                {"penalty_eps", c.fluid.penalty_eps},
                {"density", c.fluid.density}};
  j["regularization"] = {{"g_max", c.reg.g_max},
                         {"kappa", c.reg.kappa},
                         {"tol", c.reg.tol},
                         {"sigma", c.reg.sigma}};
  j["friction"] = {{"mu", c.friction.mu}};
  j["solver"] = {{"tol", s.tol},
                 {"max_iter", s.max_iter},
                 {"max_halvings", s.max_halvings},
                 {"condense", s.condense},
                 {"scheme", s.scheme},
                 {"rho_inf", s.rho_inf},
                 {"search_radius", s.search_radius},
                 {"c_n", s.c_n},
                 {"c_t", s.c_t}};
  j["pin"] = {{"load", p.load ? json(*p.load) : json(nullptr)},
              {"press_velocity", p.press_velocity},
              {"press_dt", p.press_dt},
              {"force_tol", p.force_tol},
              {"dwell_dt", p.dwell_dt},
              {"max_dwell_steps", p.max_dwell_steps},
              {"drained_ratio", p.drained_ratio},
              {"plane_acceleration", p.plane_acceleration},
              {"max_plane_velocity", p.max_plane_velocity},
              {"dt", p.dt},
              {"sweep_u_eta", p.sweep_u_eta},
              {"slide_increment", p.slide_increment},
              {"stationarity_tol", p.stationarity_tol},
              {"stationarity_window", p.stationarity_window},
              {"max_steps_per_point", p.max_steps_per_point}};
  j["cylinder"] = {{"plane_acceleration", y.plane_acceleration},
                   {"feed_velocity", y.feed_velocity},
                   {"target_reaction", y.target_reaction},
                   {"dt", y.dt},
                   {"steps", y.steps}};
  j["custom"] = {{"top_velocity", u.top_velocity},
                 {"plane_velocity", u.plane_velocity},
                 {"dt", u.dt},
                 {"steps", u.steps}};
  j["snapshot_steps"] = c.snapshot_steps;
  return j;
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& path) {
  if (!j.contains(key)) throw ConfigError("missing config field '" + path + key + "'");
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config field '" + path + key + "': " + e.what());
  }
}

void reject_unknown(const json& got, const json& known, const std::string& path) {
  if (!got.is_object()) throw ConfigError("config section '" + path + "' must be an object");
  for (auto it = got.begin(); it != got.end(); ++it) {
    if (!known.contains(it.key())) throw ConfigError("unknown config field '" + path + it.key() + "'");
    if (known.at(it.key()).is_object()) reject_unknown(it.value(), known.at(it.key()), path + it.key() + ".");
  }
}

ScenarioConfig from_json(const json& j) {
  ScenarioConfig c;
  read(j, "scenario", c.scenario, "");
  read(j, "output_dir", c.output_dir, "");
  const json& g = j.at("geometry");
  read(g, "radius", c.geometry.radius, "geometry.");
  read(g, "height", c.geometry.height, "geometry.");
  read(g, "length", c.geometry.length, "geometry.");
  read(g, "n_surf", c.geometry.n_surf, "geometry.");
  read(g, "n_height", c.geometry.n_height, "geometry.");
  read(g, "wall_thickness", c.geometry.wall_thickness, "geometry.");
  read(g, "n_circ", c.geometry.n_circ, "geometry.");
  read(g, "n_thick", c.geometry.n_thick, "geometry.");
  read(g, "clearance", c.geometry.clearance, "geometry.");
  read(g, "mesh_file", c.geometry.mesh_file, "geometry.");
  const json& m = j.at("material");
  read(m, "young_modulus", c.material.young_modulus, "material.");
  read(m, "poisson_ratio", c.material.poisson_ratio, "material.");
  read(m, "density", c.material.density, "material.");
  const json& f = j.at("fluid");
  read(f, "eta", c.fluid.eta, "fluid.");
  read(f, "penalty_eps", c.fluid.penalty_eps, "fluid.");
  read(f, "density", c.fluid.density, "fluid.");
  const json& r = j.at("regularization");
  read(r, "g_max", c.reg.g_max, "regularization.");
  read(r, "kappa", c.reg.kappa, "regularization.");
  read(r, "tol", c.reg.tol, "regularization.");
  read(r, "sigma", c.reg.sigma, "regularization.");
  c.fluid.sigma = c.reg.sigma;
  read(j.at("friction"), "mu", c.friction.mu, "friction.");
  const json& s = j.at("solver");
  read(s, "tol", c.solver.tol, "solver.");
  read(s, "max_iter", c.solver.max_iter, "solver.");
  read(s, "max_halvings", c.solver.max_halvings, "solver.");
  read(s, "condense", c.solver.condense, "solver.");
  read(s, "scheme", c.solver.scheme, "solver.");
  read(s, "rho_inf", c.solver.rho_inf, "solver.");
  read(s, "search_radius", c.solver.search_radius, "solver.");
  read(s, "c_n", c.solver.c_n, "solver.");
  read(s, "c_t", c.solver.c_t, "solver.");
  const json& p = j.at("pin");
  if (p.contains("load") && !p.at("load").is_null()) {
    double w = 0.0;
    read(p, "load", w, "pin.");
    c.pin.load = w;
  }
  read(p, "press_velocity", c.pin.press_velocity, "pin.");
  read(p, "press_dt", c.pin.press_dt, "pin.");
  read(p, "force_tol", c.pin.force_tol, "pin.");
  read(p, "dwell_dt", c.pin.dwell_dt, "pin.");
  read(p, "max_dwell_steps", c.pin.max_dwell_steps, "pin.");
  read(p, "drained_ratio", c.pin.drained_ratio, "pin.");
  read(p, "plane_acceleration", c.pin.plane_acceleration, "pin.");
  read(p, "max_plane_velocity", c.pin.max_plane_velocity, "pin.");
  read(p, "dt", c.pin.dt, "pin.");
  read(p, "sweep_u_eta", c.pin.sweep_u_eta, "pin.");
  read(p, "slide_increment", c.pin.slide_increment, "pin.");
  read(p, "stationarity_tol", c.pin.stationarity_tol, "pin.");
  read(p, "stationarity_window", c.pin.stationarity_window, "pin.");
  read(p, "max_steps_per_point", c.pin.max_steps_per_point, "pin.");
  const json& y = j.at("cylinder");
  read(y, "plane_acceleration", c.cylinder.plane_acceleration, "cylinder.");
  read(y, "feed_velocity", c.cylinder.feed_velocity, "cylinder.");
  read(y, "target_reaction", c.cylinder.target_reaction, "cylinder.");
  read(y, "dt", c.cylinder.dt, "cylinder.");
  read(y, "steps", c.cylinder.steps, "cylinder.");
  const json& u = j.at("custom");
  read(u, "top_velocity", c.custom.top_velocity, "custom.");
  read(u, "plane_velocity", c.custom.plane_velocity, "custom.");
  read(u, "dt", c.custom.dt, "custom.");
  read(u, "steps", c.custom.steps, "custom.");
  read(j, "snapshot_steps", c.snapshot_steps, "");
  return c;
}

void set_path(json& j, const std::string& dotted, const json& value) {
  json* node = &j;
  std::stringstream ss(dotted);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) throw ConfigError("empty override key");
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->contains(parts[i]) || !(*node)[parts[i]].is_object())
      throw ConfigError("unknown override section '" + parts[i] + "' in '" + dotted + "'");
    node = &(*node)[parts[i]];
  }
  if (!node->contains(parts.back())) throw ConfigError("unknown override key '" + dotted + "'");
  (*node)[parts.back()] = value;
}

}  // namespace

ScenarioConfig ScenarioConfig::defaults(const std::string& scenario) {
  if (!kScenarios.count(scenario)) throw ConfigError("unknown scenario '" + scenario + "'");
  ScenarioConfig c;
  c.scenario = scenario;
  if (scenario == "cylinder_on_flat") {
    c.geometry.radius = 4.0;
    c.geometry.wall_thickness = 0.1;
    c.geometry.n_circ = 512;
    c.geometry.n_thick = 2;
    c.geometry.clearance = 2e-3;
    c.material = {10.0, 0.3, 0.0};
    c.fluid.eta = 4e-8;
    c.fluid.penalty_eps = 1e8;
    c.reg.g_max = 1e-3;
    c.reg.kappa = suggest_kappa(10.0, 1e-3);
    c.reg.sigma = 0.0;
    c.fluid.sigma = 0.0;
    c.friction.mu = 0.0;
    c.solver.search_radius = 0.5;
    c.cylinder.target_reaction = 2e-3;
    c.snapshot_steps = {55, 150};
  } else {
    // elastic pin on rigid plane
    c.geometry.radius = 1.5;
    c.geometry.height = 1.0;
    c.geometry.length = 1.0;
    c.geometry.n_surf = 40;
    c.material = {1e-2, 0.0, 0.0};
    c.fluid.eta = 4e-8;
    c.fluid.penalty_eps = 1e8;
    c.reg.g_max = 3e-3;
    c.reg.kappa = 1.0;
    c.reg.sigma = 1e-3;
    c.fluid.sigma = 1e-3;
    c.friction.mu = 0.25;
    c.solver.search_radius = 0.2;
    c.pin.sweep_u_eta = {1e-11, 3e-11, 1e-10, 3e-10, 1e-9, 2e-9, 4e-9, 7e-9, 1e-8, 1.4e-8};
    if (scenario == "custom_mesh") c.snapshot_steps = {};
  }
  return c;
}

void ScenarioConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be positive");
  };
  if (!kScenarios.count(scenario)) throw ConfigError("unknown scenario '" + scenario + "'");
  try {
    material.validate();
    fluid.validate();
    reg.validate();
    friction.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  positive(solver.tol, "solver.tol");
  if (solver.max_iter < 1) throw ConfigError("solver.max_iter must be at least 1");
  if (solver.max_halvings < 0) throw ConfigError("solver.max_halvings must be non-negative");
  if (solver.scheme != "quasi_static" && solver.scheme != "generalized_alpha")
    throw ConfigError("solver.scheme must be quasi_static or generalized_alpha");
  if (!(solver.rho_inf >= 0.0 && solver.rho_inf <= 1.0))
    throw ConfigError("solver.rho_inf must lie in [0, 1]");
  if (solver.scheme == "generalized_alpha") positive(material.density, "material.density");
  if (scenario == "pin_on_plane" || scenario == "stribeck_sweep") {
    positive(geometry.radius, "geometry.radius");
    positive(geometry.height, "geometry.height");
    positive(geometry.length, "geometry.length");
    if (geometry.n_surf < 1) throw ConfigError("geometry.n_surf must be at least 1");
    if (!pin.load) throw ConfigError("pin.load (normal force W) is required");
    positive(*pin.load, "pin.load");
    positive(pin.press_velocity, "pin.press_velocity");
    positive(pin.press_dt, "pin.press_dt");
    positive(pin.force_tol, "pin.force_tol");
    positive(pin.dwell_dt, "pin.dwell_dt");
    positive(pin.drained_ratio, "pin.drained_ratio");
    if (pin.max_dwell_steps < 0) throw ConfigError("pin.max_dwell_steps must be non-negative");
    if (scenario == "stribeck_sweep") {
      if (pin.sweep_u_eta.empty()) throw ConfigError("pin.sweep_u_eta must not be empty");
      for (std::size_t i = 0; i < pin.sweep_u_eta.size(); ++i) {
        positive(pin.sweep_u_eta[i], "pin.sweep_u_eta entries");
        if (i > 0 && !(pin.sweep_u_eta[i] > pin.sweep_u_eta[i - 1]))
          throw ConfigError("pin.sweep_u_eta must be strictly increasing");
      }
      positive(pin.slide_increment, "pin.slide_increment");
      positive(pin.stationarity_tol, "pin.stationarity_tol");
      if (pin.stationarity_window < 2) throw ConfigError("pin.stationarity_window must be >= 2");
      if (pin.max_steps_per_point < 1) throw ConfigError("pin.max_steps_per_point must be >= 1");
    } else {
      positive(pin.plane_acceleration, "pin.plane_acceleration");
      positive(pin.max_plane_velocity, "pin.max_plane_velocity");
      positive(pin.dt, "pin.dt");
    }
  }
  if (scenario == "cylinder_on_flat") {
    positive(geometry.radius, "geometry.radius");
    positive(geometry.wall_thickness, "geometry.wall_thickness");
    if (!(geometry.radius > geometry.wall_thickness))
      throw ConfigError("geometry.radius must exceed geometry.wall_thickness");
    if (geometry.n_circ < 8) throw ConfigError("geometry.n_circ must be at least 8");
    if (geometry.n_thick < 1) throw ConfigError("geometry.n_thick must be at least 1");
    positive(cylinder.dt, "cylinder.dt");
    if (cylinder.steps < 1) throw ConfigError("cylinder.steps must be at least 1");
    if (cylinder.target_reaction < 0.0) throw ConfigError("cylinder.target_reaction must be >= 0");
  }
  if (scenario == "custom_mesh") {
    if (geometry.mesh_file.empty()) throw ConfigError("geometry.mesh_file is required");
    positive(custom.dt, "custom.dt");
    if (custom.steps < 1) throw ConfigError("custom.steps must be at least 1");
  }
  if (geometry.clearance < 0.0) throw ConfigError("geometry.clearance must be non-negative");
}

ScenarioConfig parse_config(const std::string& text, const std::vector<std::string>& overrides,
                            const std::string& hint) {
  json user = json::object();
  if (!text.empty()) {
    try {
      user = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
  }
  if (!user.is_object()) throw ConfigError("config root must be a JSON object");
  std::string scenario = hint;
  if (scenario.empty()) scenario = user.value("scenario", std::string("pin_on_plane"));
  json j = to_json(ScenarioConfig::defaults(scenario));
  reject_unknown(user, j, "");
  j.merge_patch(user);
  j["scenario"] = scenario;
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
    const std::string key = o.substr(0, eq), raw = o.substr(eq + 1);
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::parse_error&) {
      value = raw;
    }
    set_path(j, key, value);
  }
  if (j.at("scenario") != scenario) {
    // the scenario itself was overridden: restart from its defaults
    const std::string s2 = j.at("scenario").get<std::string>();
    json base = to_json(ScenarioConfig::defaults(s2));
    base.merge_patch(user);
    base["scenario"] = s2;
    for (const std::string& o : overrides) {
      const auto eq = o.find('=');
      json value;
      try {
        value = json::parse(o.substr(eq + 1));
      } catch (const json::parse_error&) {
        value = o.substr(eq + 1);
      }
      set_path(base, o.substr(0, eq), value);
    }
    j = base;
  }
  ScenarioConfig c = from_json(j);
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides,
                           const std::string& hint) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides, hint);
}

std::string config_to_json(const ScenarioConfig& c, int indent) { return to_json(c).dump(indent); }

}  // namespace ehl
