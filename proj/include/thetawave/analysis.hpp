#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "thetawave/dynamics.hpp"
#include "thetawave/grid.hpp"
#include "thetawave/scenarios.hpp"

namespace theta {

// theta = 1/(b+1); the parameter map between the family and the b-equation.
double theta_to_b(double theta);
double b_to_theta(double b);

struct BTransformParams {
  double theta = 1.0 / 3.0;
  double c0 = 0;
  double gamma = 0;   // dispersion coefficient
  double alpha = 1.0; // length scale, > 0

  void validate() const;
  // Constant shift U0 and frame drift W such that
  // u(t,x) = U0 + v(tau, z), z = alpha (x - W t), tau = alpha theta t
  // maps the family onto the b-equation with coefficients (c0, gamma, alpha).
  double shift_u0() const;
  double drift() const;
};

struct BTrajectory {
  Grid zgrid;
  std::vector<double> taus;
  std::vector<Field> states;  // v(tau, z) on zgrid
};

// Resample a trajectory into b-equation variables (exact spectral shift).
BTrajectory transform_to_b(const Trajectory& traj,
                           const BTransformParams& params);

// Max-norm residual of the b-equation on the transformed fields; v_tau from
// centered differences of the resampled snapshots, never from the family's
// right-hand side.
struct BResidual {
  std::vector<double> taus;
  std::vector<double> max_residual;
  double worst = 0;
};
BResidual b_equation_residual(const BTrajectory& btraj,
                              const BTransformParams& params);

// Smooth compactly supported bump psi(t,x) for the weak formulation.
struct TestFunction {
  double t0 = 0, x0 = 0, rt = 1, rx = 1;
  double val(double t, double x) const;
  double dt(double t, double x) const;
  double dx(double t, double x) const;
};

// 12 bumps tiling [0,T] x [x_lo,x_hi] at two scales.
std::vector<TestFunction> standard_test_set(double T, double x_lo,
                                            double x_hi);

// Candidate solution handle for the weak-residual quadrature.
struct WeakCandidate {
  std::function<double(double, double)> u;     // u(t,x)
  std::function<double(double, double)> flux;  // F(u)(t,x)
  std::function<double(double)> u0;            // u(0,x)
  // kink line x = kink(t) along which the x-quadrature splits, if any
  std::optional<std::function<double(double)>> kink;
};

WeakCandidate peakon_candidate(double c, double theta);
// Exponential profile of amplitude c translated at an arbitrary speed; its
// flux is evaluated with the same closed-form kernel convolution.
WeakCandidate traveling_profile_candidate(double c, double theta, double speed);
// Candidate sampled from a solver trajectory (periodic box, smooth data).
WeakCandidate sampled_candidate(const Trajectory& traj, double theta);

struct WeakResidual {
  double value = 0;
  double quad_error = 0;  // node-halving estimate
};

// Left-hand side of the weak identity
//   int_0^T int (u psi_t + F(u) psi_x) dx dt + int u0 psi(0,.) dx
// by Gauss quadrature split along the candidate's kink curve.
WeakResidual weak_residual(const WeakCandidate& cand, const TestFunction& psi,
                           double T, int nt = 96, int nx = 64);

struct PeakonVerification {
  double c = 0;
  std::vector<double> thetas;
  // residuals[i][j]: theta i, test function j
  std::vector<std::vector<double>> residuals;
  std::vector<std::vector<double>> quad_errors;
  std::vector<double> impostor_max;  // per theta
  bool pass = false;
  double tolerance = 1e-8;
  double impostor_floor = 1e-3;
};

PeakonVerification verify_peakon(double c, const std::vector<double>& thetas,
                                 double T = 5.0);

std::string peakon_verification_json(const PeakonVerification& v);

}  // namespace theta
