#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thetawave/grid.hpp"
#include "thetawave/spectral.hpp"

namespace theta {

enum class Sign { NonNegative, NonPositive, Indefinite };

// Pointwise sign classification with tolerance rel_tol * max|f|.
Sign classify_sign(const Field& f, double rel_tol = 1e-12);

struct DiagnosticsRecord {
  double time = 0;
  double mass_u = 0;   // int u
  double mass_m = 0;   // int m
  double h1_sq = 0;    // int (u^2 + u_x^2)
  double m_l2_sq = 0;  // int m^2
  std::optional<double> lp_momentum;  // int |m|^{theta/(1-theta)}, theta in (0,1)
  bool lp_is_norm = true;             // false when the exponent p < 1
  std::optional<double> dhh;          // even-ratio invariant, theta = 2n/(2n-1)
  double sup_u = 0;
  double sup_ux = 0;
  double min_ux = 0;
  std::optional<bool> sign_consistent;
};

// theta = 2n/(2n-1) detection; returns n >= 1 when theta matches to 1e-9.
std::optional<int> even_ratio_index(double theta);

DiagnosticsRecord record(const Field& u, double theta,
                         std::optional<Sign> m0_sign = std::nullopt);

class UnsupportedExponent : public std::runtime_error {
 public:
  explicit UnsupportedExponent(double theta)
      : std::runtime_error("lp_momentum requires theta in (0,1), got " +
                           std::to_string(theta)) {}
};

// int |m|^{theta/(1-theta)} dx; conserved along the flow for theta in (0,1).
double lp_momentum(const Field& m, double theta);

// Conserved combination at theta = 2n/(2n-1):
//   int (4 n^2 m^{2n-2} m_x^2 + m^{2n}) dx.
double dhh_invariant(const Field& m, int n);

// | d/dt int m^2  -  (3 theta - 2) int u_x m^2 |, the time derivative taken
// instantaneously from the semidiscrete right-hand side.
double m_l2_rate_residual(const Field& u, double theta);

// Residual of the theta = 0 energy rate identity
//   d/dt int (u^2 + 2 u_x^2 + u_xx^2) = -2 int u_x (u_x^2 + u_xx^2),
// both sides evaluated instantaneously.
double theta0_energy_residual(const Field& u);

struct Trajectory;  // dynamics.hpp

struct Theta0BoundReport {
  std::vector<double> times;
  std::vector<bool> slope_ok;   // sup|u_x| <= ||u0||_L1 (1 + 1e-8)
  std::vector<bool> h1_ok;      // H1 <= e^{t ||u0||_L1 / 2} H1(0) (1 + 1e-6)
  std::vector<bool> m_l1_ok;    // ||m||_L1 == ||u0||_L1 to 1e-8 relative
  bool all_ok = true;
};

// Theorem bounds for the theta = 0 flow with sign-definite m0.
// Throws std::invalid_argument when m0 has no definite sign.
Theta0BoundReport bound_check_theta0(const Trajectory& traj, const Field& m0);

// true iff the sign pattern of m0 is preserved at every recorded time,
// checked pointwise at theta = 0 and along characteristics otherwise.
bool sign_persistence_check(const Trajectory& traj, const Field& m0,
                            double theta, double tol = 1e-12);

}  // namespace theta
