#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "thetawave/dynamics.hpp"
#include "thetawave/scenarios.hpp"

namespace theta {

struct GridSpec {
  int n = 256;
  double length = 80.0;
  double origin = -40.0;
  Grid make() const { return make_grid(n, length, origin); }
};

struct RunManifest {
  SimConfig config;
  GridSpec grid;
  ScenarioSpec scenario;
  std::string out_dir;  // relative to output_root() unless absolute

  std::string to_json() const;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Parse and validate a run configuration; unknown keys are rejected with
// their path, theta accepts "p/q" strings.
RunManifest parse_config(const std::string& json_text);
RunManifest load_config(const std::filesystem::path& file);

struct RunResult {
  int exit_code = 0;  // 0 completed, 2 blow-up detected, 1 internal error
  Terminal terminal = Terminal::Completed;
  std::optional<BlowupReport> blowup;
  std::filesystem::path out_dir;
  std::string error;
};

// Execute a run and write: manifest.json, diagnostics.csv, field snapshots
// at the output cadence, hypothesis report, and a blow-up report when the
// detector fires.
RunResult run(const RunManifest& manifest);
// Same, also handing back the trajectory (for in-process callers).
RunResult run(const RunManifest& manifest, Trajectory* out_traj);

struct SweepSpec {
  std::vector<double> theta_values;
  RunManifest base;  // scenario + grid + config template
  int workers = 1;

  void validate() const;
};

struct SweepRow {
  double theta = 0;
  std::string outcome;  // completed | blowup-below | blowup-above | error
  std::optional<double> t_detect;
  std::optional<double> t_star;
  std::optional<bool> bound_satisfied;
  std::string error;
};

// Runs execute in parallel (each run single-threaded); rows come back
// ordered by theta and the CSV is bytewise independent of worker count.
std::vector<SweepRow> sweep(const SweepSpec& spec);
void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepRow>& rows);

struct ConvergenceReport {
  std::vector<double> dts;
  std::vector<double> temporal_errors;  // vs dt/16 reference
  std::vector<double> temporal_orders;
  std::vector<int> ns;
  std::vector<double> spatial_errors;   // vs fine reference
  double spatial_ratio = 0;             // error(n)/error(2n)
};

ConvergenceReport convergence_study(const RunManifest& manifest);
void write_convergence_csv(const std::filesystem::path& path,
                           const ConvergenceReport& rep);

}  // namespace theta
