#pragma once

#include "ehl/config.hpp"
#include "ehl/coupled.hpp"

#include <memory>
#include <string>
#include <vector>

namespace ehl {

/// Load-path controls read by the Dirichlet value functions and the rigid
/// master at every step; drivers adjust them between steps.
struct Controls {
  double top_x = 0.0;    // prescribed displacement of the loaded set
  double top_y = 0.0;
  double plane_u = 0.0;  // rigid plane velocity along +x
};

struct ScenarioModel {
  std::unique_ptr<Mesh> mesh;
  CoupledProblem problem;
  std::shared_ptr<Controls> controls;
  BoundarySet loaded_set = BoundarySet::Dirichlet;
};

/// Rigid plane y = 0 under an elastic body whose dirichlet set follows
/// Controls. The problem is prepared (validated, interface built).
ScenarioModel build_pin_model(const ScenarioConfig& c);
ScenarioModel build_cylinder_model(const ScenarioConfig& c);
ScenarioModel build_custom_model(const ScenarioConfig& c);

struct StepRecord {
  int step = 0;
  double time = 0.0;
  double plane_velocity = 0.0;
  double friction_coefficient = 0.0;
  double min_film_thickness = 0.0;
  double max_fluid_pressure = 0.0;
  double max_contact_pressure = 0.0;
  Vec2 reaction = Vec2::Zero();
  int newton_iterations = 0;
};

struct Profile {
  int step = 0;
  double time = 0.0;
  InterfaceSnapshot snap;
};

struct SweepPoint {
  double u_eta = 0.0;  // N/mm
  double friction_coefficient = 0.0;
  double min_film_thickness = 0.0;
  double max_fluid_pressure = 0.0;
  double max_contact_pressure = 0.0;
  int steps = 0;
  bool stationary = false;
  bool failed = false;
};

struct RunArtifacts {
  std::string scenario;
  std::vector<StepRecord> steps;
  std::vector<Profile> profiles;
  std::vector<SweepPoint> sweep;
  std::vector<std::string> failures;
  bool solver_failed = false;
  int total_newton_iterations = 0;
  int max_newton_iterations = 0;
};

/// |R_x| / |R_y| of a reaction; the single friction reader of all scenarios.
double friction_coefficient(const Vec2& reaction);

RunArtifacts run_cylinder_on_flat(const ScenarioConfig& c);
RunArtifacts run_pin_on_plane(const ScenarioConfig& c);
RunArtifacts run_stribeck_sweep(const ScenarioConfig& c, const std::vector<double>& u_eta);
RunArtifacts run_custom_mesh(const ScenarioConfig& c);
/// Dispatches on c.scenario.
RunArtifacts run_scenario(const ScenarioConfig& c);

/// Pressing phase of the pin: displacement-driven approach until the
/// vertical reaction reaches W, then secant refinement of the final top
/// displacement to within pin.force_tol. Records steps into `run`.
MonolithicState press_pin(const ScenarioModel& model, const ScenarioConfig& c, RunArtifacts& run);

// ---------------------------------------------------------------------------
// Output

enum ExitCode : int { kExitOk = 0, kExitSolverFailure = 1, kExitEmpty = 2, kExitConfig = 3 };

/// Writes steps.csv, profiles_step_<n>.csv, summary.json and, for pin runs,
/// stribeck.csv + stribeck.svg. Returns the process exit code implied by the
/// run. Throws IoError if the directory cannot be written.
int emit_artifacts(const RunArtifacts& run, const ScenarioConfig& c, const std::string& dir);

/// Simple log-log (or linear) line plot as standalone SVG markup.
std::string svg_line_plot(const std::vector<double>& x, const std::vector<double>& y,
                          const std::string& title, const std::string& xlabel,
                          const std::string& ylabel, bool logx, bool logy);

/// Parses a CSV with a header line into columns of doubles.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::string& path);

}  // namespace ehl
