#include "ehl/scenarios.hpp"

#include "ehl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ehl {

namespace {

void configure(ScenarioModel& m, const ScenarioConfig& c) {
  CoupledProblem& pb = m.problem;
  pb.mesh = m.mesh.get();
  pb.material = c.material;
  pb.dofs = DofMap(m.mesh->num_nodes());
  auto ctl = m.controls;
  pb.dofs.fix_set(*m.mesh, m.loaded_set, 0, [ctl](double) { return ctl->top_x; });
  pb.dofs.fix_set(*m.mesh, m.loaded_set, 1, [ctl](double) { return ctl->top_y; });
  pb.integrator.scheme = c.solver.scheme == "generalized_alpha" ? TimeScheme::GeneralizedAlpha
                                                                : TimeScheme::QuasiStatic;
  pb.integrator.rho_inf = c.solver.rho_inf;
  pb.reg = c.reg;
  pb.friction = c.friction;
  pb.fluid = c.fluid;
  pb.fluid.sigma = c.reg.sigma;
  pb.master = [ctl](double) {
    RigidLine l;
    l.point = Vec2::Zero();
    l.normal = Vec2(0.0, 1.0);
    l.velocity = Vec2(ctl->plane_u, 0.0);
    return l;
  };
  pb.search_radius = c.solver.search_radius;
  pb.c_n = c.solver.c_n;
  pb.c_t = c.solver.c_t;
  pb.solver.tolerance = c.solver.tol;
  pb.solver.max_iterations = c.solver.max_iter;
  pb.solver.max_halvings = c.solver.max_halvings;
  pb.solver.condense = c.solver.condense;
  pb.prepare();
}

StepRecord record(const ScenarioModel& m, const MonolithicState& s, int iterations) {
  const InterfaceSnapshot snap = snapshot(m.problem, s);
  StepRecord r;
  r.step = s.step;
  r.time = s.solid.t;
  r.plane_velocity = m.controls->plane_u;
  r.reaction = reaction(m.problem, s, m.loaded_set);
  r.friction_coefficient = friction_coefficient(r.reaction);
  r.min_film_thickness = snap.h.size() ? snap.h.minCoeff() : 0.0;
  r.max_fluid_pressure = snap.p.size() ? std::max(0.0, snap.p.maxCoeff()) : 0.0;
  r.max_contact_pressure = snap.lambda_n.size() ? std::max(0.0, snap.lambda_n.maxCoeff()) : 0.0;
  r.newton_iterations = iterations;
  return r;
}

bool wants_profile(const ScenarioConfig& c, int step) {
  return std::find(c.snapshot_steps.begin(), c.snapshot_steps.end(), step) != c.snapshot_steps.end();
}

/// Advances one step and logs it. Returns false (and logs the failure) if
/// the step could not be completed.
bool take_step(const ScenarioModel& m, const ScenarioConfig& c, MonolithicState& state, double dt,
               RunArtifacts& run) {
  NewtonReport rep;
  try {
    MonolithicState next = advance(m.problem, state, dt, &rep);
    state = std::move(next);
  } catch (const StepFailure& e) {
    run.failures.push_back("step " + std::to_string(state.step + 1) + " (t = " +
                           std::to_string(state.solid.t + dt) + "): " + e.what());
    run.solver_failed = true;
    return false;
  }
  run.total_newton_iterations += rep.iterations;
  run.max_newton_iterations = std::max(run.max_newton_iterations, rep.iterations);
  run.steps.push_back(record(m, state, rep.iterations));
  if (wants_profile(c, state.step))
    run.profiles.push_back({state.step, state.solid.t, snapshot(m.problem, state)});
  return true;
}

/// Keeps the normal reaction near W while sliding: a damped correction of
/// the prescribed top displacement after every step, using the secant
/// stiffness of the pressing phase. Returns the relative load error.
double hold_load(const ScenarioModel& m, const ScenarioConfig& c, const StepRecord& last,
                 double stiffness) {
  const double W = *c.pin.load;
  const double err = std::abs(last.reaction.y()) - W;
  m.controls->top_y += 0.5 * err / stiffness;
  return std::abs(err) / W;
}

double press_stiffness(const ScenarioModel& m, const ScenarioConfig& c) {
  return *c.pin.load / std::max(std::abs(m.controls->top_y), 1e-12);
}

void final_profile(const ScenarioModel& m, const MonolithicState& s, RunArtifacts& run) {
  if (s.step == 0) return;
  if (!run.profiles.empty() && run.profiles.back().step == s.step) return;
  run.profiles.push_back({s.step, s.solid.t, snapshot(m.problem, s)});
}

void log_step(const ScenarioModel& m, const ScenarioConfig& c, const MonolithicState& s,
              int iterations, RunArtifacts& run) {
  run.max_newton_iterations = std::max(run.max_newton_iterations, iterations);
  run.steps.push_back(record(m, s, iterations));
  if (wants_profile(c, s.step)) run.profiles.push_back({s.step, s.solid.t, snapshot(m.problem, s)});
}

/// Holds the pressed pin at rest until the squeeze film has drained and the
/// contact alone carries W. The top displacement follows a secant on the
/// drained response (through the origin until two points exist).
MonolithicState dwell(const ScenarioModel& m, const ScenarioConfig& c, MonolithicState state,
                      RunArtifacts& run) {
  Controls& ctl = *m.controls;
  const double W = *c.pin.load;
  double y_prev = 0.0, r_prev = 0.0;
  for (int k = 0; k < c.pin.max_dwell_steps; ++k) {
    NewtonReport rep;
    state = advance(m.problem, state, c.pin.dwell_dt, &rep);
    run.total_newton_iterations += rep.iterations;
    log_step(m, c, state, rep.iterations, run);
    const StepRecord& r = run.steps.back();
    const double R = std::abs(r.reaction.y());
    if (std::abs(R - W) <= c.pin.force_tol * W &&
        r.max_fluid_pressure <= c.pin.drained_ratio * r.max_contact_pressure)
      return state;
    const double y = ctl.top_y;
    const double slope = k > 0 && R != r_prev ? (y - y_prev) / (R - r_prev) : y / R;
    y_prev = y;
    r_prev = R;
    ctl.top_y = y + (W - R) * slope;
  }
  if (c.pin.max_dwell_steps > 0)
    throw StepFailure("squeeze film did not drain at the target load");
  return state;
}

}  // namespace

double friction_coefficient(const Vec2& r) {
  return std::abs(r.y()) > 0.0 ? std::abs(r.x()) / std::abs(r.y()) : 0.0;
}

ScenarioModel build_pin_model(const ScenarioConfig& c) {
  ScenarioModel m;
  const auto& g = c.geometry;
  m.mesh = std::make_unique<Mesh>(
      generate_pin(g.radius, g.height, g.length, g.n_surf, g.n_height, g.clearance));
  m.controls = std::make_shared<Controls>();
  configure(m, c);
  return m;
}

ScenarioModel build_cylinder_model(const ScenarioConfig& c) {
  ScenarioModel m;
  const auto& g = c.geometry;
  m.mesh = std::make_unique<Mesh>(
      generate_half_cylinder(g.radius, g.wall_thickness, g.n_circ, g.n_thick, g.clearance));
  m.controls = std::make_shared<Controls>();
  configure(m, c);
  return m;
}

ScenarioModel build_custom_model(const ScenarioConfig& c) {
  ScenarioModel m;
  m.mesh = std::make_unique<Mesh>(read_mesh_file(c.geometry.mesh_file));
  m.controls = std::make_shared<Controls>();
  configure(m, c);
  return m;
}

MonolithicState press_pin(const ScenarioModel& m, const ScenarioConfig& c, RunArtifacts& run) {
  Controls& ctl = *m.controls;
  const double W = *c.pin.load;
  const double v = c.pin.press_velocity;
  ctl.plane_u = 0.0;
  ctl.top_x = 0.0;
  MonolithicState state = MonolithicState::initial(m.problem);
  const double dy = v * c.pin.press_dt;
  const int max_press_steps = static_cast<int>(std::ceil(0.5 * c.geometry.height / dy));

  double y_lo = ctl.top_y, r_lo = 0.0;
  for (int k = 0;; ++k) {
    if (k >= max_press_steps) throw StepFailure("pin pressing did not reach the target load");
    const double y_next = y_lo - dy;
    ctl.top_y = y_next;
    NewtonReport rep;
    MonolithicState next = advance(m.problem, state, c.pin.press_dt, &rep);
    const double r_next = std::abs(reaction(m.problem, next, m.loaded_set).y());
    run.total_newton_iterations += rep.iterations;
    if (r_next >= W) {
      // Secant on the final top displacement, re-solving from the last
      // state below the target.
      double ya = y_lo, ra = r_lo, yb = y_next, rb = r_next;
      MonolithicState best = next;
      double rbest = r_next;
      for (int it = 0; it < 30 && std::abs(rbest - W) > c.pin.force_tol * W; ++it) {
        const double y = yb + (W - rb) * (ya - yb) / (ra - rb);
        ctl.top_y = y;
        const double dt = std::max(std::abs(y - y_lo) / v, 1e-12);
        MonolithicState trial = advance(m.problem, state, dt, &rep);
        const double r = std::abs(reaction(m.problem, trial, m.loaded_set).y());
        run.total_newton_iterations += rep.iterations;
        ya = yb;
        ra = rb;
        yb = y;
        rb = r;
        best = std::move(trial);
        rbest = r;
      }
      if (std::abs(rbest - W) > c.pin.force_tol * W)
        throw StepFailure("force control did not reach W within tolerance");
      state = std::move(best);
      log_step(m, c, state, rep.iterations, run);
      return dwell(m, c, std::move(state), run);
    }
    state = std::move(next);
    y_lo = y_next;
    r_lo = r_next;
    log_step(m, c, state, rep.iterations, run);
  }
}

RunArtifacts run_pin_on_plane(const ScenarioConfig& c) {
  RunArtifacts run;
  run.scenario = c.scenario;
  const ScenarioModel m = build_pin_model(c);
  MonolithicState state;
  try {
    state = press_pin(m, c, run);
  } catch (const StepFailure& e) {
    run.failures.push_back(std::string("pressing: ") + e.what());
    run.solver_failed = true;
    return run;
  }
  const double k_press = press_stiffness(m, c);
  const int n = static_cast<int>(std::ceil(c.pin.max_plane_velocity / c.pin.plane_acceleration / c.pin.dt));
  for (int k = 1; k <= n; ++k) {
    m.controls->plane_u =
        std::min(c.pin.plane_acceleration * k * c.pin.dt, c.pin.max_plane_velocity);
    if (!take_step(m, c, state, c.pin.dt, run)) break;
    hold_load(m, c, run.steps.back(), k_press);
  }
  final_profile(m, state, run);
  return run;
}

RunArtifacts run_stribeck_sweep(const ScenarioConfig& c, const std::vector<double>& u_eta) {
  RunArtifacts run;
  run.scenario = c.scenario;
  const ScenarioModel m = build_pin_model(c);
  MonolithicState state;
  try {
    state = press_pin(m, c, run);
  } catch (const StepFailure& e) {
    run.failures.push_back(std::string("pressing: ") + e.what());
    run.solver_failed = true;
    return run;
  }
  const double k_press = press_stiffness(m, c);
  for (double ue : u_eta) {
    SweepPoint pt;
    pt.u_eta = ue;
    m.controls->plane_u = ue / c.fluid.eta;
    const double dt = c.pin.slide_increment / m.controls->plane_u;
    std::vector<double> hist;
    MonolithicState work = state;
    const double top_y = m.controls->top_y;
    for (int k = 0; k < c.pin.max_steps_per_point; ++k) {
      if (!take_step(m, c, work, dt, run)) {
        pt.failed = true;
        break;
      }
      ++pt.steps;
      hist.push_back(run.steps.back().friction_coefficient);
      const double load_err = hold_load(m, c, run.steps.back(), k_press);
      const int w = c.pin.stationarity_window;
      if (static_cast<int>(hist.size()) >= w && load_err <= c.pin.force_tol) {
        const auto first = hist.end() - w;
        const double lo = *std::min_element(first, hist.end());
        const double hi = *std::max_element(first, hist.end());
        if (hi - lo <= c.pin.stationarity_tol * std::abs(hist.back())) {
          pt.stationary = true;
          break;
        }
      }
    }
    if (pt.failed) {
      m.controls->top_y = top_y;
    } else {
      state = work;
      const StepRecord& last = run.steps.back();
      pt.friction_coefficient = last.friction_coefficient;
      pt.min_film_thickness = last.min_film_thickness;
      pt.max_fluid_pressure = last.max_fluid_pressure;
      pt.max_contact_pressure = last.max_contact_pressure;
      run.profiles.push_back({state.step, state.solid.t, snapshot(m.problem, state)});
    }
    run.sweep.push_back(pt);
  }
  return run;
}

RunArtifacts run_cylinder_on_flat(const ScenarioConfig& c) {
  RunArtifacts run;
  run.scenario = c.scenario;
  const ScenarioModel m = build_cylinder_model(c);
  MonolithicState state = MonolithicState::initial(m.problem);
  bool feeding = true;
  for (int k = 1; k <= c.cylinder.steps; ++k) {
    const double t = k * c.cylinder.dt;
    m.controls->plane_u = c.cylinder.plane_acceleration * t;
    if (feeding) m.controls->top_y -= c.cylinder.feed_velocity * c.cylinder.dt;
    if (!take_step(m, c, state, c.cylinder.dt, run)) break;
    if (c.cylinder.target_reaction > 0.0 &&
        std::abs(run.steps.back().reaction.y()) >= c.cylinder.target_reaction)
      feeding = false;
  }
  final_profile(m, state, run);
  return run;
}

RunArtifacts run_custom_mesh(const ScenarioConfig& c) {
  RunArtifacts run;
  run.scenario = c.scenario;
  const ScenarioModel m = build_custom_model(c);
  MonolithicState state = MonolithicState::initial(m.problem);
  m.controls->plane_u = c.custom.plane_velocity;
  for (int k = 1; k <= c.custom.steps; ++k) {
    m.controls->top_y -= c.custom.top_velocity * c.custom.dt;
    if (!take_step(m, c, state, c.custom.dt, run)) break;
  }
  final_profile(m, state, run);
  return run;
}

RunArtifacts run_scenario(const ScenarioConfig& c) {
  if (c.scenario == "cylinder_on_flat") return run_cylinder_on_flat(c);
  if (c.scenario == "pin_on_plane") return run_pin_on_plane(c);
  if (c.scenario == "stribeck_sweep") return run_stribeck_sweep(c, c.pin.sweep_u_eta);
  if (c.scenario == "custom_mesh") return run_custom_mesh(c);
  throw ConfigError("unknown scenario '" + c.scenario + "'");
}

}  // namespace ehl
