#pragma once

#include <optional>
#include <vector>

#include "thetawave/diagnostics.hpp"
#include "thetawave/grid.hpp"
#include "thetawave/spectral.hpp"

namespace theta {

// Regimes of the one-parameter family, by the global-regularity and
// blow-up ranges of the parameter.
enum class ThetaClass {
  BorderlineZero,   // theta = 0
  BlowupSignRange,  // 0 < theta < 1/4
  BlowupSlopeRange, // 1/4 <= theta < 1/2
  GlobalRange,      // 1/2 <= theta <= 1
  EvenRatio,        // theta = 2n/(2n-1), n >= 1
  Other,
};

ThetaClass classify_theta(double theta);

struct SimConfig {
  double theta = 1.0 / 3.0;
  double t_end = 1.0;
  double cfl = 0.3;                    // in (0, 1]
  double dt_min = 1e-10;
  double slope_blowup_threshold = 1e6; // on sup|u_x|
  int output_every = 1;               // record every k-th step

  void validate() const;
};

enum class Divergence { Below, Above, None };
enum class BlowupCause { SlopeThreshold, DtUnderflow, NonFinite };

struct BlowupReport {
  double t_detect = 0;  // last time the slope was below the 1e3 bracket
  Divergence direction = Divergence::Below;
  double max_slope = 0;
  double min_slope = 0;
  std::optional<double> theoretical_bound;  // T*, when computed upstream
  BlowupCause cause = BlowupCause::SlopeThreshold;
};

enum class Terminal { Completed, Blowup };

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> states;
  std::vector<DiagnosticsRecord> diagnostics;
  Terminal terminal = Terminal::Completed;
  std::optional<BlowupReport> blowup;
};

// Conservative flux F(u) = theta u^2/2 + Q * [(1-theta) u^2/2 +
// (4 theta - 1) u_x^2/2]; quadratic products are 2/3-rule dealiased.
Field flux(const Field& u, double theta);

// u_t = -d/dx F(u).
Field rhs(const Field& u, double theta);

// dt = cfl dx / max(|theta| max|u|, 1e-8), capped by the remaining time.
double cfl_dt(const Field& u, double theta, double cfl,
              double t_remaining = std::numeric_limits<double>::infinity());

class StageNanError : public NanError {
 public:
  StageNanError(int stage)
      : NanError("rk4 stage " + std::to_string(stage)), stage_(stage) {}
  int stage() const { return stage_; }

 private:
  int stage_;
};

// One classical 4-stage explicit Runge-Kutta step.
Field step_rk4(const Field& u, double dt, double theta);

// Advance to t_end or terminate on slope blow-up / dt underflow / NaN.
// Single-threaded and deterministic for fixed (u0, config).
Trajectory evolve(const Field& u0, const SimConfig& config);

Divergence classify_divergence(const Trajectory& traj);

}  // namespace theta
