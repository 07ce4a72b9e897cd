#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "thetawave/analysis.hpp"
#include "thetawave/io.hpp"
#include "thetawave/runner.hpp"

namespace fs = std::filesystem;
using namespace theta;

namespace {

int cmd_run(const std::string& config_path) {
  RunManifest m = load_config(config_path);
  RunResult r = run(m);
  if (r.exit_code == 1) {
    std::cerr << "error: " << r.error << '\n';
    return 1;
  }
  if (r.terminal == Terminal::Blowup) {
    std::cout << "blow-up detected at t = " << format_full(r.blowup->t_detect)
              << " (direction "
              << (r.blowup->direction == Divergence::Below ? "below" : "above")
              << "), artifacts in " << r.out_dir.string() << '\n';
    return 2;
  }
  std::cout << "completed; artifacts in " << r.out_dir.string() << '\n';
  return 0;
}

int cmd_sweep(const std::string& config_path,
              const std::vector<double>& thetas, int workers) {
  SweepSpec spec;
  spec.base = load_config(config_path);
  spec.theta_values = thetas;
  spec.workers = workers;
  if (spec.theta_values.empty()) {
    std::cerr << "error: sweep requires at least one --theta value\n";
    return 1;
  }
  auto rows = sweep(spec);
  const fs::path dir = output_root() /
                       (spec.base.out_dir.empty() ? "sweep" : spec.base.out_dir);
  fs::create_directories(dir);
  write_sweep_csv(dir / "sweep.csv", rows);
  for (const auto& r : rows) {
    std::cout << "theta=" << format_full(r.theta) << "  " << r.outcome;
    if (r.t_detect) std::cout << "  t_detect=" << format_full(*r.t_detect);
    if (r.t_star) std::cout << "  T*=" << format_full(*r.t_star);
    std::cout << '\n';
  }
  std::cout << "sweep table: " << (dir / "sweep.csv").string() << '\n';
  return 0;
}

int cmd_verify_peakon(double c, const std::vector<double>& thetas) {
  PeakonVerification v = verify_peakon(c, thetas);
  const fs::path dir = output_root() / "verify-peakon";
  fs::create_directories(dir);
  const fs::path out = dir / "report.json";
  std::ofstream f(out);
  f << peakon_verification_json(v) << '\n';
  double worst = 0;
  for (const auto& row : v.residuals)
    for (double r : row) worst = std::max(worst, std::abs(r));
  std::cout << (v.pass ? "PASS" : "FAIL") << "  max |residual| = "
            << format_full(worst) << "  report: " << out.string() << '\n';
  return v.pass ? 0 : 1;
}

int cmd_transform_b(const std::string& run_dir, double c0, double gamma,
                    double alpha) {
  // reload snapshots written by `run`
  std::vector<fs::path> snaps;
  for (const auto& e : fs::directory_iterator(run_dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("u_", 0) == 0 && e.path().extension() == ".csv")
      snaps.push_back(e.path());
  }
  if (snaps.size() < 5) {
    std::cerr << "error: " << run_dir << " holds fewer than 5 snapshots\n";
    return 1;
  }
  std::sort(snaps.begin(), snaps.end());
  Trajectory traj;
  double theta_val = 0;
  for (const auto& p : snaps) {
    FieldSnapshot s = read_field_snapshot(p);
    traj.times.push_back(s.time);
    traj.states.push_back(s.field);
    theta_val = s.theta;
  }
  BTransformParams params{theta_val, c0, gamma, alpha};
  BTrajectory bt = transform_to_b(traj, params);
  BResidual res = b_equation_residual(bt, params);
  const fs::path out = fs::path(run_dir) / "b_transform_residual.csv";
  std::ofstream f(out);
  f << "tau,max_residual\n";
  for (size_t i = 0; i < res.taus.size(); ++i)
    f << format_full(res.taus[i]) << ',' << format_full(res.max_residual[i])
      << '\n';
  std::cout << "b-equation residual (max over checked times): "
            << format_full(res.worst) << "  table: " << out.string() << '\n';
  return 0;
}

int cmd_convergence(const std::string& config_path) {
  RunManifest m = load_config(config_path);
  ConvergenceReport rep = convergence_study(m);
  const fs::path dir =
      output_root() / (m.out_dir.empty() ? "convergence" : m.out_dir);
  fs::create_directories(dir);
  write_convergence_csv(dir / "convergence.csv", rep);
  std::cout << "temporal orders:";
  for (double o : rep.temporal_orders) std::cout << ' ' << o;
  std::cout << "\nspatial error ratio n=" << rep.ns[0] << " vs n=" << rep.ns[1]
            << ": " << rep.spatial_ratio << '\n';
  std::cout << "table: " << (dir / "convergence.csv").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"theta-wave: numerical laboratory for a family of nonlocal "
               "shallow-water wave equations"};
  app.require_subcommand(1);

  std::string config_path, run_dir;
  std::vector<double> thetas;
  double c = 1.0, c0 = 0.0, gamma = 0.0, alpha = 1.0;
  int workers = 1;

  auto* run_cmd = app.add_subcommand("run", "execute a single run");
  run_cmd->add_option("config", config_path, "JSON config file")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep over theta");
  sweep_cmd->add_option("config", config_path, "JSON config file")->required();
  sweep_cmd->add_option("--theta", thetas, "theta values")->expected(-1);
  sweep_cmd->add_option("--workers", workers, "parallel workers");

  auto* vp_cmd =
      app.add_subcommand("verify-peakon", "weak-solution check of the peakon");
  vp_cmd->add_option("--c", c, "peakon amplitude");
  vp_cmd->add_option("--theta", thetas, "theta values")->expected(-1);

  auto* tb_cmd =
      app.add_subcommand("transform-b", "b-equation change of variables");
  tb_cmd->add_option("run-dir", run_dir, "directory of a finished run")
      ->required();
  tb_cmd->add_option("--c0", c0, "b-equation c0");
  tb_cmd->add_option("--gamma", gamma, "b-equation dispersion Gamma");
  tb_cmd->add_option("--alpha", alpha, "b-equation length scale alpha");

  auto* cv_cmd =
      app.add_subcommand("convergence", "temporal and spatial refinement study");
  cv_cmd->add_option("config", config_path, "JSON config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(config_path);
    if (sweep_cmd->parsed()) return cmd_sweep(config_path, thetas, workers);
    if (vp_cmd->parsed()) {
      if (thetas.empty()) thetas = {0.0, 0.25, 1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0, 2.0};
      return cmd_verify_peakon(c, thetas);
    }
    if (tb_cmd->parsed()) return cmd_transform_b(run_dir, c0, gamma, alpha);
    if (cv_cmd->parsed()) return cmd_convergence(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
