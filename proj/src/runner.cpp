#include "thetawave/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "thetawave/io.hpp"
#include "thetawave/lagrangian.hpp"

namespace theta {

using nlohmann::json;

namespace {

double parse_theta_value(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return std::stod(s);
      const double num = std::stod(s.substr(0, slash));
      const double den = std::stod(s.substr(slash + 1));
      if (den == 0.0) throw ConfigError(path + ": zero denominator");
      return num / den;
    } catch (const std::invalid_argument&) {
      throw ConfigError(path + ": cannot parse '" + s + "'");
    }
  }
  throw ConfigError(path + ": expected number or \"p/q\" string");
}

void reject_unknown(const json& obj, const std::vector<std::string>& known,
                    const std::string& prefix) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ConfigError("unknown key: " + prefix + it.key());
  }
}

}  // namespace

std::string RunManifest::to_json() const {
  json j;
  j["theta"] = config.theta;
  j["t_end"] = config.t_end;
  j["cfl"] = config.cfl;
  j["dt_min"] = config.dt_min;
  j["slope_blowup_threshold"] = config.slope_blowup_threshold;
  j["output_every"] = config.output_every;
  j["grid"] = {{"n", grid.n}, {"length", grid.length}, {"origin", grid.origin}};
  json sc;
  sc["kind"] = scenario.kind;
  for (const auto& [k, v] : scenario.params) sc[k] = v;
  if (!scenario.custom_file.empty()) sc["file"] = scenario.custom_file;
  j["scenario"] = sc;
  if (!out_dir.empty()) j["out_dir"] = out_dir;
  return j.dump(2);
}

RunManifest parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j,
                 {"theta", "t_end", "cfl", "dt_min", "slope_blowup_threshold",
                  "output_every", "grid", "scenario", "out_dir", "result"},
                 "");
  RunManifest m;
  if (j.contains("theta")) m.config.theta = parse_theta_value(j["theta"], "theta");
  if (j.contains("t_end")) m.config.t_end = j["t_end"].get<double>();
  if (j.contains("cfl")) m.config.cfl = j["cfl"].get<double>();
  if (j.contains("dt_min")) m.config.dt_min = j["dt_min"].get<double>();
  if (j.contains("slope_blowup_threshold"))
    m.config.slope_blowup_threshold = j["slope_blowup_threshold"].get<double>();
  if (j.contains("output_every"))
    m.config.output_every = j["output_every"].get<int>();

  if (j.contains("grid")) {
    const json& g = j["grid"];
    reject_unknown(g, {"n", "length", "origin"}, "grid.");
    if (g.contains("n")) m.grid.n = g["n"].get<int>();
    if (g.contains("length")) m.grid.length = g["length"].get<double>();
    if (g.contains("origin")) m.grid.origin = g["origin"].get<double>();
  }
  if (j.contains("scenario")) {
    const json& s = j["scenario"];
    if (!s.contains("kind")) throw ConfigError("scenario.kind is required");
    m.scenario.kind = s["kind"].get<std::string>();
    for (auto it = s.begin(); it != s.end(); ++it) {
      if (it.key() == "kind") continue;
      if (it.key() == "file") {
        m.scenario.custom_file = it.value().get<std::string>();
        continue;
      }
      if (!it.value().is_number())
        throw ConfigError("scenario." + it.key() + ": expected a number");
      m.scenario.params[it.key()] = it.value().get<double>();
    }
  } else {
    throw ConfigError("scenario block is required");
  }
  if (j.contains("out_dir")) m.out_dir = j["out_dir"].get<std::string>();

  try {
    m.config.validate();
    (void)m.grid.make();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return m;
}

RunManifest load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config: " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

std::filesystem::path resolve_out_dir(const RunManifest& m) {
  std::filesystem::path dir(m.out_dir.empty() ? std::string("run") : m.out_dir);
  if (dir.is_absolute()) return dir;
  return output_root() / dir;
}

}  // namespace

RunResult run(const RunManifest& manifest) { return run(manifest, nullptr); }

RunResult run(const RunManifest& manifest, Trajectory* out_traj) {
  RunResult res;
  try {
    const Grid g = manifest.grid.make();
    BuiltScenario sc =
        build_scenario(manifest.scenario, g, manifest.config.theta);
    const std::filesystem::path dir = resolve_out_dir(manifest);
    std::filesystem::create_directories(dir);
    res.out_dir = dir;

    Trajectory traj = evolve(sc.u0, manifest.config);

    // boundary tail magnitude of the truncated line domain
    double boundary_mag = 0.0;
    for (const Field& u : traj.states)
      boundary_mag = std::max(boundary_mag, std::abs(u[0]));

    json report;
    report["terminal"] =
        traj.terminal == Terminal::Completed ? "completed" : "blowup";
    report["hypotheses"] = {
        {"m0_sign", sc.report.m0_sign == Sign::NonNegative   ? "nonneg"
                    : sc.report.m0_sign == Sign::NonPositive ? "nonpos"
                                                             : "indefinite"},
        {"regime", regime_name(sc.report.regime)},
        {"momentum_sign_condition", sc.report.momentum_sign_condition},
        {"u_x_at_xstar", sc.report.u_x_at_xstar},
    };
    if (sc.report.odd_about) report["hypotheses"]["odd_about"] = *sc.report.odd_about;
    report["max_boundary_magnitude"] = boundary_mag;

    if (traj.blowup) {
      const BlowupReport& b = *traj.blowup;
      json bj;
      bj["t_detect"] = b.t_detect;
      bj["direction"] = b.direction == Divergence::Below ? "below" : "above";
      bj["max_slope"] = b.max_slope;
      bj["min_slope"] = b.min_slope;
      bj["cause"] = b.cause == BlowupCause::SlopeThreshold ? "slope-threshold"
                    : b.cause == BlowupCause::DtUnderflow  ? "dt-underflow"
                                                           : "non-finite";
      if (sc.report.odd_about && manifest.config.theta > 0 &&
          manifest.config.theta < 0.5 && sc.report.u_x_at_xstar < 0) {
        const double t_star =
            blowup_bound(sc.u0, *sc.report.odd_about, manifest.config.theta);
        bj["theoretical_bound"] = t_star;
        traj.blowup->theoretical_bound = t_star;
      }
      report["blowup"] = bj;
    }

    {
      json mj = json::parse(manifest.to_json());
      json result;
      result["terminal"] = report["terminal"];
      if (report.contains("blowup")) result["blowup"] = report["blowup"];
      mj["result"] = result;
      std::ofstream mf(dir / "manifest.json");
      mf << mj.dump(2) << '\n';
      std::ofstream rf(dir / "report.json");
      rf << report.dump(2) << '\n';
    }
    write_diagnostics_csv(dir / "diagnostics.csv", traj.diagnostics);
    if (traj.states.size() >= 2) {
      std::vector<double> seeds;
      const Grid& gg = traj.states.front().grid();
      for (int i = 0; i < 17; ++i)
        seeds.push_back(gg.center() + (i - 8) * gg.length / 32.0);
      write_paths_csv(dir / "paths.csv",
                      advect(traj, seeds, manifest.config.theta));
    }
    if (sc.report.odd_about && manifest.config.theta > 0 &&
        manifest.config.theta < 0.5) {
      write_riccati_csv(dir / "riccati.csv",
                        riccati_trace(traj, *sc.report.odd_about,
                                      manifest.config.theta));
    }
    for (size_t i = 0; i < traj.states.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "u_%06zu.csv", i);
      write_field_snapshot(dir / name, traj.states[i], traj.times[i],
                           manifest.config.theta);
    }
    res.terminal = traj.terminal;
    res.blowup = traj.blowup;
    res.exit_code = (traj.terminal == Terminal::Blowup) ? 2 : 0;
    if (out_traj) *out_traj = std::move(traj);
  } catch (const std::exception& e) {
    res.exit_code = 1;
    res.error = e.what();
  }
  return res;
}

void SweepSpec::validate() const {
  if (theta_values.empty())
    throw ConfigError("sweep: theta_values must be non-empty");
  for (double t : theta_values)
    if (!std::isfinite(t)) throw ConfigError("sweep: non-finite theta");
  if (workers < 1) throw ConfigError("sweep: workers must be >= 1");
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<double> thetas = spec.theta_values;
  std::sort(thetas.begin(), thetas.end());
  std::vector<SweepRow> rows(thetas.size());

  const int nruns = static_cast<int>(thetas.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(spec.workers)
#endif
  for (int i = 0; i < nruns; ++i) {
    SweepRow row;
    row.theta = thetas[i];
    try {
      RunManifest m = spec.base;
      m.config.theta = thetas[i];
      std::ostringstream sub;
      sub << (m.out_dir.empty() ? "sweep" : m.out_dir) << "/theta_"
          << format_full(thetas[i]);
      m.out_dir = sub.str();
      Trajectory traj;
      RunResult r = run(m, &traj);
      if (r.exit_code == 1) {
        row.outcome = "error";
        row.error = r.error;
      } else if (r.terminal == Terminal::Completed) {
        row.outcome = "completed";
      } else {
        row.outcome = r.blowup->direction == Divergence::Below
                          ? "blowup-below"
                          : "blowup-above";
        row.t_detect = r.blowup->t_detect;
        const Grid g = m.grid.make();
        BuiltScenario sc = build_scenario(m.scenario, g, thetas[i]);
        if (sc.report.odd_about && thetas[i] > 0 && thetas[i] < 0.5 &&
            sc.report.u_x_at_xstar < 0) {
          row.t_star = blowup_bound(sc.u0, *sc.report.odd_about, thetas[i]);
          row.bound_satisfied = *row.t_detect < *row.t_star;
        }
      }
    } catch (const std::exception& e) {
      row.outcome = "error";
      row.error = e.what();
    }
    rows[static_cast<size_t>(i)] = std::move(row);
  }
  return rows;
}

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "theta,outcome,t_detect,t_star,bound_satisfied\n";
  for (const auto& r : rows) {
    out << format_full(r.theta) << ',' << r.outcome << ',';
    if (r.t_detect) out << format_full(*r.t_detect);
    out << ',';
    if (r.t_star) out << format_full(*r.t_star);
    out << ',';
    if (r.bound_satisfied) out << (*r.bound_satisfied ? "1" : "0");
    out << '\n';
  }
}

namespace {

Field evolve_fixed_dt(const Field& u0, double theta, double dt, long nsteps) {
  Field u = u0;
  for (long i = 0; i < nsteps; ++i) u = step_rk4(u, dt, theta);
  return u;
}

}  // namespace

ConvergenceReport convergence_study(const RunManifest& manifest) {
  ConvergenceReport rep;
  const double theta = manifest.config.theta;
  const double t_final = std::min(manifest.config.t_end, 1.0);

  // temporal refinement against a dt/16 reference
  {
    const Grid g = manifest.grid.make();
    BuiltScenario sc = build_scenario(manifest.scenario, g, theta);
    const double dt0 = t_final / 20.0;
    Field ref = evolve_fixed_dt(sc.u0, theta, dt0 / 16.0, 320);
    for (int fac : {1, 2, 4}) {
      Field u = evolve_fixed_dt(sc.u0, theta, dt0 / fac, 20L * fac);
      rep.dts.push_back(dt0 / fac);
      rep.temporal_errors.push_back(sup_abs(u - ref));
    }
    for (size_t i = 0; i + 1 < rep.temporal_errors.size(); ++i)
      rep.temporal_orders.push_back(
          std::log2(rep.temporal_errors[i] / rep.temporal_errors[i + 1]));
  }

  // spatial refinement against a fine-grid reference at fixed small dt
  {
    const int nfine = 1024;
    const double dt = 0.004;
    const long nsteps = static_cast<long>(std::lround(t_final / dt));
    GridSpec fine = manifest.grid;
    fine.n = nfine;
    BuiltScenario scf = build_scenario(manifest.scenario, fine.make(), theta);
    Field uref = evolve_fixed_dt(scf.u0, theta, dt, nsteps);
    for (int n : {128, 256}) {
      GridSpec gs = manifest.grid;
      gs.n = n;
      BuiltScenario sc = build_scenario(manifest.scenario, gs.make(), theta);
      Field u = evolve_fixed_dt(sc.u0, theta, dt, nsteps);
      const int stride = nfine / n;
      double err = 0;
      for (int i = 0; i < n; ++i)
        err = std::max(err, std::abs(u[i] - uref[i * stride]));
      rep.ns.push_back(n);
      rep.spatial_errors.push_back(err);
    }
    rep.spatial_ratio = rep.spatial_errors[0] / rep.spatial_errors[1];
  }
  return rep;
}

void write_convergence_csv(const std::filesystem::path& path,
                           const ConvergenceReport& rep) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "kind,param,error\n";
  for (size_t i = 0; i < rep.dts.size(); ++i)
    out << "temporal," << format_full(rep.dts[i]) << ','
        << format_full(rep.temporal_errors[i]) << '\n';
  for (size_t i = 0; i < rep.ns.size(); ++i)
    out << "spatial," << rep.ns[i] << ','
        << format_full(rep.spatial_errors[i]) << '\n';
}

}  // namespace theta
