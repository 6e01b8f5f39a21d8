#pragma once

#include "ehl/contact_law.hpp"
#include "ehl/lubrication.hpp"
#include "ehl/material.hpp"
#include "ehl/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ehl {

struct GeometryConfig {
  // pin
  double radius = 1.5;
  double height = 1.0;
  double length = 1.0;
  Index n_surf = 40;
  Index n_height = 0;  // 0: n_surf / 2
  // half cylinder (radius shared)
  double wall_thickness = 0.1;
  Index n_circ = 512;
  Index n_thick = 2;
  double clearance = 0.0;
  // custom mesh
  std::string mesh_file;
};

struct SolverConfig {
  double tol = 1e-8;
  int max_iter = 50;
  int max_halvings = 5;
  bool condense = true;
  std::string scheme = "quasi_static";  // or "generalized_alpha"
  double rho_inf = 0.9;
  double search_radius = 0.0;  // 0: 10 g_max
  double c_n = 0.0;            // 0: kappa
  double c_t = 0.0;            // 0: kappa * 1 s/mm
};

struct PinLoading {
  std::optional<double> load;    // normal reaction W, N/mm; required
  double press_velocity = 0.05;  // mm/s
  double press_dt = 0.002;       // s
  double force_tol = 1e-3;       // relative
  double dwell_dt = 10.0;        // s, steps that drain the squeeze film at W
  int max_dwell_steps = 50;      // 0: no dwell
  double drained_ratio = 1e-3;   // max fluid / max contact pressure ending the dwell
  double plane_acceleration = 0.01;  // mm/s^2 (pin_on_plane)
  double max_plane_velocity = 0.35;  // mm/s (pin_on_plane)
  double dt = 1.0;                   // s (pin_on_plane)
  std::vector<double> sweep_u_eta;   // N/mm (stribeck_sweep)
  double slide_increment = 0.005;    // mm per sweep step
  double stationarity_tol = 1e-3;
  int stationarity_window = 10;
  int max_steps_per_point = 600;
};

struct CylinderLoading {
  double plane_acceleration = 2.0;  // mm/s^2
  double feed_velocity = 0.2;       // mm/s, downward
  double target_reaction = 0.0;     // N/mm; feed stops once reached (0: never)
  double dt = 0.05;
  int steps = 150;
};

struct CustomLoading {
  double top_velocity = 0.0;    // downward velocity of the dirichlet set, mm/s
  double plane_velocity = 0.0;  // mm/s
  double dt = 0.05;
  int steps = 10;
};

struct ScenarioConfig {
  std::string scenario = "pin_on_plane";  // cylinder_on_flat, pin_on_plane, stribeck_sweep, custom_mesh
  std::string output_dir = "out";
  GeometryConfig geometry;
  NeoHookeanParams material;
  FluidParams fluid;
  RegularizationParams reg;  // reg.sigma also feeds the flow factors
  FrictionParams friction;
  SolverConfig solver;
  PinLoading pin;
  CylinderLoading cylinder;
  CustomLoading custom;
  std::vector<int> snapshot_steps;

  /// Throws ConfigError on any invalid or missing required field.
  void validate() const;
  /// Defaults of the named scenario.
  static ScenarioConfig defaults(const std::string& scenario);
};

/// Parses a JSON document over the scenario defaults, then applies
/// `key.path=value` overrides (values parsed as JSON, else taken as strings).
/// Throws ConfigError.
ScenarioConfig parse_config(const std::string& json_text,
                            const std::vector<std::string>& overrides = {},
                            const std::string& scenario_hint = "");
ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {},
                           const std::string& scenario_hint = "");
/// Full JSON echo; parse_config(config_to_json(c)) reproduces c exactly.
std::string config_to_json(const ScenarioConfig& c, int indent = 2);

}  // namespace ehl
