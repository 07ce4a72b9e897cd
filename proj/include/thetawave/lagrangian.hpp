#pragma once

#include <optional>
#include <vector>

#include "thetawave/dynamics.hpp"
#include "thetawave/grid.hpp"

namespace theta {

// One characteristic x' = theta u(t, x) with Jacobian F' = theta u_x F and
// the slope accumulator g' = u_x(t, x(t)) used by the theta = 0 invariant.
struct CharacteristicPath {
  double alpha = 0;
  std::vector<double> times;
  std::vector<double> x;         // wrapped into the periodic box
  std::vector<double> x_unwrapped;
  std::vector<double> jacobian;  // F, F(0) = 1
  std::vector<double> m_along;   // m(t, x(t))
  std::vector<double> ux_accum;  // int_0^t u_x(tau, x(tau)) dtau
  bool truncated = false;        // recording stopped near breakdown
};

// Integrate characteristics through a recorded trajectory. Fourth order in
// time (RK4 over cubic-Hermite reconstruction between snapshots) with
// trigonometric interpolation in space.
std::vector<CharacteristicPath> advect(const Trajectory& traj,
                                       const std::vector<double>& seeds,
                                       double theta);

// Max over paths and times of |m_along F^{1/theta - 1} - m0(alpha)|,
// normalized by max|m0|. At theta = 0 the exponential form
// m_along e^{int u_x} - m0(alpha) is used instead.
double invariant_residual(const std::vector<CharacteristicPath>& paths,
                          const Field& m0, double theta);

enum class RiccatiRegime { SignCondition, SlopeOnly };  // theta<=1/4, [1/4,1/2)

struct RiccatiTrace {
  double x_star = 0;
  double theta = 0;
  RiccatiRegime regime = RiccatiRegime::SlopeOnly;
  double kappa = 0;  // coefficient of d^2 in the comparison inequality
  std::vector<double> times;
  std::vector<double> d;             // u_x(t, x*)
  std::vector<double> lhs_residual;  // d' + kappa d^2, instantaneous
  std::optional<double> t_star;
};

// Track d = u_x at the symmetry point of odd data. Throws when the initial
// state is not odd about x_star within 1e-10 sup|u0|.
RiccatiTrace riccati_trace(const Trajectory& traj, double x_star, double theta);

class NoBlowupBound : public std::runtime_error {
 public:
  explicit NoBlowupBound(const std::string& why) : std::runtime_error(why) {}
};

// Upper bound T* for the breakdown time of the equation's own clock, from
// the Riccati comparison at the symmetry point:
//   0 < theta <= 1/4: T* = -1/(theta u_x(0,x*))
//   1/4 <= theta < 1/2: T* = 2/((2 theta - 1) u_x(0,x*))
// The two coincide at theta = 1/4. Requires u_x(0, x*) < 0.
double blowup_bound(const Field& u0, double x_star, double theta);

// Q * [(1-4 theta) u_x^2 + (theta-1) u^2](x*) <= (1-4 theta)(u_x^2 - u^2)(x*)
// within 1e-10 * scale; the kernel-domination step of the sign-condition
// blow-up argument.
bool kernel_domination_check(const Field& u, double x_star, double theta);

}  // namespace theta
