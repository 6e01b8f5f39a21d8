#include "ehl/errors.hpp"
#include "ehl/scenarios.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ehl {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  return out;
}

void write_steps(const RunArtifacts& run, const fs::path& p) {
  auto out = open_out(p);
  out << "step,time,plane_velocity,friction_coefficient,min_film_thickness,"
         "max_fluid_pressure,max_contact_pressure,reaction_x,reaction_y,newton_iterations\n";
  for (const StepRecord& r : run.steps)
    out << r.step << ',' << num(r.time) << ',' << num(r.plane_velocity) << ','
        << num(r.friction_coefficient) << ',' << num(r.min_film_thickness) << ','
        << num(r.max_fluid_pressure) << ',' << num(r.max_contact_pressure) << ','
        << num(r.reaction.x()) << ',' << num(r.reaction.y()) << ',' << r.newton_iterations << '\n';
}

void write_profile(const Profile& pr, const fs::path& p) {
  auto out = open_out(p);
  out << "node,x,y,fluid_pressure,film_thickness,contact_pressure,gap,in_film\n";
  const InterfaceSnapshot& s = pr.snap;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const auto k = static_cast<Index>(i);
    out << i << ',' << num(s.x[i].x()) << ',' << num(s.x[i].y()) << ',' << num(s.p[k]) << ','
        << num(s.h[k]) << ',' << num(s.lambda_n[k]) << ',' << num(s.gap[k]) << ','
        << int(s.in_film[i]) << '\n';
  }
}

/// Stribeck data: the sweep points when present, otherwise the sliding
/// steps of a pin run (non-zero plane velocity).
void stribeck_series(const RunArtifacts& run, double eta, std::vector<double>& ue,
                     std::vector<double>& mu) {
  if (!run.sweep.empty()) {
    for (const SweepPoint& p : run.sweep)
      if (!p.failed) {
        ue.push_back(p.u_eta);
        mu.push_back(p.friction_coefficient);
      }
    return;
  }
  for (const StepRecord& r : run.steps)
    if (r.plane_velocity > 0.0) {
      ue.push_back(r.plane_velocity * eta);
      mu.push_back(r.friction_coefficient);
    }
}

void write_stribeck(const RunArtifacts& run, const ScenarioConfig& c, const fs::path& dir) {
  auto out = open_out(dir / "stribeck.csv");
  std::vector<double> ue, mu;
  if (!run.sweep.empty()) {
    out << "u_eta,friction_coefficient,min_film_thickness,max_fluid_pressure,"
           "max_contact_pressure,steps,stationary,failed\n";
    for (const SweepPoint& p : run.sweep)
      out << num(p.u_eta) << ',' << num(p.friction_coefficient) << ','
          << num(p.min_film_thickness) << ',' << num(p.max_fluid_pressure) << ','
          << num(p.max_contact_pressure) << ',' << p.steps << ',' << int(p.stationary) << ','
          << int(p.failed) << '\n';
  } else {
    out << "u_eta,friction_coefficient,min_film_thickness,max_fluid_pressure,"
           "max_contact_pressure\n";
    for (const StepRecord& r : run.steps)
      if (r.plane_velocity > 0.0)
        out << num(r.plane_velocity * c.fluid.eta) << ',' << num(r.friction_coefficient) << ','
            << num(r.min_film_thickness) << ',' << num(r.max_fluid_pressure) << ','
            << num(r.max_contact_pressure) << '\n';
  }
  stribeck_series(run, c.fluid.eta, ue, mu);
  bool logx = !ue.empty() && std::all_of(ue.begin(), ue.end(), [](double v) { return v > 0; });
  bool logy = !mu.empty() && std::all_of(mu.begin(), mu.end(), [](double v) { return v > 0; });
  auto svg = open_out(dir / "stribeck.svg");
  svg << svg_line_plot(ue, mu, "Stribeck curve", "U eta [N/mm]", "friction coefficient", logx, logy);
}

}  // namespace

int emit_artifacts(const RunArtifacts& run, const ScenarioConfig& c, const std::string& dir_str) {
  const fs::path dir(dir_str);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir_str + "': " + ec.message());

  // An empty run leaves only the summary behind.
  std::vector<std::string> profile_files;
  if (!run.steps.empty()) {
    write_steps(run, dir / "steps.csv");
    for (const Profile& pr : run.profiles) {
      const std::string name = "profiles_step_" + std::to_string(pr.step) + ".csv";
      write_profile(pr, dir / name);
      profile_files.push_back(name);
    }
    if (c.scenario == "pin_on_plane" || c.scenario == "stribeck_sweep") write_stribeck(run, c, dir);
  }

  int code = kExitOk;
  if (run.steps.empty()) code = kExitEmpty;
  else if (run.solver_failed) code = kExitSolverFailure;

  nlohmann::json j;
  j["scenario"] = run.scenario;
  j["config"] = nlohmann::json::parse(config_to_json(c));
  j["exit_code"] = code;
  j["num_steps"] = run.steps.size();
  j["total_newton_iterations"] = run.total_newton_iterations;
  j["max_newton_iterations"] = run.max_newton_iterations;
  j["solver_failed"] = run.solver_failed;
  j["failures"] = run.failures;
  j["profiles"] = profile_files;
  if (!run.steps.empty()) {
    const StepRecord& last = run.steps.back();
    j["final"] = {{"time", last.time},
                  {"friction_coefficient", last.friction_coefficient},
                  {"min_film_thickness", last.min_film_thickness},
                  {"max_fluid_pressure", last.max_fluid_pressure},
                  {"max_contact_pressure", last.max_contact_pressure},
                  {"reaction", {last.reaction.x(), last.reaction.y()}}};
  }
  if (!run.sweep.empty()) {
    auto& arr = j["sweep"] = nlohmann::json::array();
    for (const SweepPoint& p : run.sweep)
      arr.push_back({{"u_eta", p.u_eta},
                     {"friction_coefficient", p.friction_coefficient},
                     {"steps", p.steps},
                     {"stationary", p.stationary},
                     {"failed", p.failed}});
  }
  auto out = open_out(dir / "summary.json");
  out << j.dump(2) << '\n';
  return code;
}

std::string svg_line_plot(const std::vector<double>& x, const std::vector<double>& y,
                          const std::string& title, const std::string& xlabel,
                          const std::string& ylabel, bool logx, bool logy) {
  const double W = 640, H = 420, L = 80, R = 20, T = 40, B = 60;
  auto tx = [&](double v) { return logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return logy ? std::log10(v) : v; };
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  const std::size_t n = std::min(x.size(), y.size());
  if (n > 0) {
    x0 = x1 = tx(x[0]);
    y0 = y1 = ty(y[0]);
    for (std::size_t i = 1; i < n; ++i) {
      x0 = std::min(x0, tx(x[i]));
      x1 = std::max(x1, tx(x[i]));
      y0 = std::min(y0, ty(y[i]));
      y1 = std::max(y1, ty(y[i]));
    }
  }
  if (x1 - x0 <= 0) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 <= 0) { y0 -= 0.5; y1 += 0.5; }
  auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
    << "</text>\n";
  s << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
    << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\" font-size=\"13\">"
    << xlabel << (logx ? " (log)" : "") << "</text>\n";
  s << "<text x=\"18\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
    << "transform=\"rotate(-90 18 " << H / 2 << ")\">" << ylabel << (logy ? " (log)" : "")
    << "</text>\n";
  auto label = [&](double v, bool lg) { return num(lg ? std::pow(10.0, v) : v).substr(0, 9); };
  s << "<text x=\"" << L << "\" y=\"" << H - B + 16 << "\" font-size=\"11\">" << label(x0, logx)
    << "</text>\n";
  s << "<text x=\"" << W - R << "\" y=\"" << H - B + 16 << "\" font-size=\"11\" text-anchor=\"end\">"
    << label(x1, logx) << "</text>\n";
  s << "<text x=\"" << L - 4 << "\" y=\"" << H - B << "\" font-size=\"11\" text-anchor=\"end\">"
    << label(y0, logy) << "</text>\n";
  s << "<text x=\"" << L - 4 << "\" y=\"" << T + 10 << "\" font-size=\"11\" text-anchor=\"end\">"
    << label(y1, logy) << "</text>\n";
  if (n > 0) {
    s << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < n; ++i) s << px(x[i]) << ',' << py(y[i]) << ' ';
    s << "\"/>\n";
    for (std::size_t i = 0; i < n; ++i)
      s << "<circle cx=\"" << px(x[i]) << "\" cy=\"" << py(y[i]) << "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) return t;
  {
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) t.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError("non-numeric cell '" + cell + "' in '" + path + "'");
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace ehl
