#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thetawave/diagnostics.hpp"
#include "thetawave/grid.hpp"

namespace theta {

// Exact peakon of the family: amplitude c, crest speed theta*c, so that
// u(t,x) = c e^{-|x - theta c t|} solves the conservative form in the
// distributional sense. Its momentum is the point mass 2c delta at the crest.
struct PeakonSolution {
  double c = 0;
  double speed = 0;  // theta * c

  double u(double t, double x) const {
    return c * std::exp(-std::abs(x - speed * t));
  }
  // slope away from the crest (undefined on the kink line)
  double ux(double t, double x) const {
    const double xi = x - speed * t;
    const double s = xi > 0 ? 1.0 : (xi < 0 ? -1.0 : 0.0);
    return -c * s * std::exp(-std::abs(xi));
  }
  double momentum_mass() const { return 2.0 * c; }
};

PeakonSolution peakon(double c, double theta);

struct SmoothedPeakon {
  Field u0;
  Field m0;
  bool under_resolved = false;  // eps below the grid spacing
};

// u = Q * m_eps with m_eps a Gaussian of mass 2c and width eps; converges to
// the peakon as eps -> 0 and keeps m >= 0 for c > 0.
SmoothedPeakon smoothed_peakon(double c, double eps, const Grid& grid);

// u0 = Q * m0; the natural lift since every hypothesis is stated on m0.
Field from_momentum(const Field& m0);

enum class Regime {
  GlobalBySign,
  GlobalByRange,
  GlobalByEvenRatio,
  BlowupSignCondition,  // 0 < theta <= 1/4 with (x - x*) m0 <= 0
  BlowupSlopeCondition, // 1/4 <= theta < 1/2 with odd data, u_x(0,x*) < 0
  Unclassified,
};

std::string regime_name(Regime r);

struct HypothesisReport {
  Sign m0_sign = Sign::Indefinite;
  std::optional<double> odd_about;
  bool momentum_sign_condition = false;  // (x - x*) m0 <= 0 pointwise
  double u_x_at_xstar = 0;
  Regime regime = Regime::Unclassified;
  std::vector<std::string> applicable_theorems;
};

struct OddBlowupData {
  Field u0;
  Field m0;
  HypothesisReport report;
};

// m0(x) = -amplitude (x - x*) e^{-((x - x*)/width)^2}: odd about x*, with
// (x - x*) m0 <= 0 everywhere by construction. x* snaps to the nearest grid
// point so the samples are odd in exact arithmetic.
OddBlowupData odd_blowup_data(double amplitude, double width, const Grid& grid,
                              double x_star);

// Same datum rescaled so that u_x(0, x*) equals slope_target (< 0).
OddBlowupData odd_blowup_for_slope(double slope_target, double width,
                                   const Grid& grid, double x_star);

// Classify which regime the pair (u0, theta) falls into. When m0 is not
// supplied it is recovered as (1 - dxx) u0; oddness is probed about the box
// center.
HypothesisReport validate(const Field& u0, double theta,
                          const Field* m0 = nullptr);

struct ScenarioSpec {
  std::string kind;  // zero|smoothed_peakon|from_momentum|odd_blowup|custom
  std::map<std::string, double> params;
  std::string custom_file;  // momentum snapshot for kind == "custom"
};

struct BuiltScenario {
  Field u0;
  Field m0;
  HypothesisReport report;
};

BuiltScenario build_scenario(const ScenarioSpec& spec, const Grid& grid,
                             double theta);

}  // namespace theta
