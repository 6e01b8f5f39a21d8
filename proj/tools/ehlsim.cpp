// ehlsim: runs one lubricated-contact scenario and writes its artifacts.

#include "ehl/config.hpp"
#include "ehl/errors.hpp"
#include "ehl/scenarios.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Plane-strain lubricated contact simulator"};
  std::string config_path, scenario, out_dir;
  std::vector<std::string> overrides;
  bool dump = false;
  app.add_option("-c,--config", config_path, "JSON scenario file");
  app.add_option("-s,--scenario", scenario,
                 "cylinder_on_flat | pin_on_plane | stribeck_sweep | custom_mesh");
  app.add_option("-o,--out", out_dir, "output directory (overrides output_dir)");
  app.add_option("-D,--override", overrides, "override a config field, e.g. --override pin.load=5e-6")
      ->take_all();
  app.add_flag("--print-config", dump, "print the resolved configuration and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ehl::kExitConfig;
  }

  ehl::ScenarioConfig cfg;
  try {
    cfg = config_path.empty() ? ehl::parse_config("{}", overrides, scenario)
                              : ehl::load_config(config_path, overrides, scenario);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
  } catch (const ehl::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return ehl::kExitConfig;
  }
  if (dump) {
    std::cout << ehl::config_to_json(cfg) << '\n';
    return 0;
  }

  try {
    const ehl::RunArtifacts run = ehl::run_scenario(cfg);
    const int code = ehl::emit_artifacts(run, cfg, cfg.output_dir);
    for (const auto& f : run.failures) std::cerr << "failure: " << f << '\n';
    std::cout << cfg.scenario << ": " << run.steps.size() << " steps, "
              << run.total_newton_iterations << " Newton iterations, artifacts in "
              << cfg.output_dir << '\n';
    return code;
  } catch (const ehl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return ehl::kExitConfig;
  } catch (const ehl::InvalidGeometry& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return ehl::kExitConfig;
  } catch (const ehl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ehl::kExitSolverFailure;
  }
}
