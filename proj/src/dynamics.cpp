#include "thetawave/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace theta {

ThetaClass classify_theta(double theta) {
  if (!std::isfinite(theta))
    throw std::invalid_argument("theta must be finite");
  if (theta == 0.0) return ThetaClass::BorderlineZero;
  if (even_ratio_index(theta)) return ThetaClass::EvenRatio;
  if (theta > 0.0 && theta < 0.25) return ThetaClass::BlowupSignRange;
  if (theta >= 0.25 && theta < 0.5) return ThetaClass::BlowupSlopeRange;
  if (theta >= 0.5 && theta <= 1.0) return ThetaClass::GlobalRange;
  return ThetaClass::Other;
}

void SimConfig::validate() const {
  if (!(t_end > 0)) throw std::invalid_argument("t_end must be positive");
  if (!(cfl > 0 && cfl <= 1))
    throw std::invalid_argument("cfl must lie in (0, 1]");
  if (!(dt_min > 0)) throw std::invalid_argument("dt_min must be positive");
  if (!(slope_blowup_threshold > 0))
    throw std::invalid_argument("slope_blowup_threshold must be positive");
  if (output_every < 1)
    throw std::invalid_argument("output_every must be >= 1");
}

Field flux(const Field& u, double theta) {
  u.require_finite("flux");
  Field ux = deriv(u);
  Field u2 = dealias(pointwise(u, u));
  Field ux2 = dealias(pointwise(ux, ux));
  Field conv =
      green_convolve(axpby(0.5 * (1.0 - theta), u2, 0.5 * (4.0 * theta - 1.0), ux2));
  return axpby(0.5 * theta, u2, 1.0, conv);
}

Field rhs(const Field& u, double theta) {
  Field r = deriv(flux(u, theta));
  r *= -1.0;
  return r;
}

double cfl_dt(const Field& u, double theta, double cfl, double t_remaining) {
  const double speed = std::max(std::abs(theta) * sup_abs(u), 1e-8);
  return std::min(cfl * u.grid().dx / speed, t_remaining);
}

Field step_rk4(const Field& u, double dt, double theta) {
  if (!(dt > 0)) throw std::invalid_argument("step_rk4: dt must be positive");
  Field k1 = rhs(u, theta);
  if (!k1.finite()) throw StageNanError(1);
  Field k2 = rhs(axpby(1.0, u, 0.5 * dt, k1), theta);
  if (!k2.finite()) throw StageNanError(2);
  Field k3 = rhs(axpby(1.0, u, 0.5 * dt, k2), theta);
  if (!k3.finite()) throw StageNanError(3);
  Field k4 = rhs(axpby(1.0, u, dt, k3), theta);
  if (!k4.finite()) throw StageNanError(4);
  Field out = u;
  const double w = dt / 6.0;
  for (int i = 0; i < u.n(); ++i)
    out[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

Trajectory evolve(const Field& u0, const SimConfig& config) {
  config.validate();
  u0.require_finite("evolve: initial data");
  const double theta = config.theta;
  const Grid& g = u0.grid();

  const Sign m0_sign = classify_sign(helmholtz_apply(u0));
  std::optional<Sign> sign_ctx;
  if (m0_sign != Sign::Indefinite) sign_ctx = m0_sign;

  Trajectory traj;
  auto record_state = [&](double t, const Field& u) {
    traj.times.push_back(t);
    traj.states.push_back(u);
    DiagnosticsRecord d = record(u, theta, sign_ctx);
    d.time = t;
    traj.diagnostics.push_back(d);
  };

  Field u = u0;
  double t = 0.0;
  double t_last_below_bracket = 0.0;  // slope bracket 1e3
  double max_slope_seen = 0.0, min_slope_seen = 0.0;
  record_state(0.0, u);

  auto finish_blowup = [&](BlowupCause cause, const Field& last_u, double tt) {
    if (traj.times.back() < tt) record_state(tt, last_u);
    BlowupReport rep;
    rep.cause = cause;
    rep.t_detect = t_last_below_bracket;
    rep.max_slope = max_slope_seen;
    rep.min_slope = min_slope_seen;
    rep.direction = (std::abs(min_slope_seen) >= max_slope_seen)
                        ? Divergence::Below
                        : Divergence::Above;
    traj.terminal = Terminal::Blowup;
    traj.blowup = rep;
  };

  long step = 0;
  while (config.t_end - t > 1e-12 * config.t_end) {
    // advective CFL step plus a unit-speed accuracy cap so that the
    // borderline theta = 0 flow still resolves its own time scale
    const double dt_phys =
        std::min(cfl_dt(u, theta, config.cfl), config.cfl * g.dx);
    if (dt_phys < config.dt_min) {
      finish_blowup(BlowupCause::DtUnderflow, u, t);
      return traj;
    }
    const double dt = std::min(dt_phys, config.t_end - t);
    Field next(g);
    try {
      next = step_rk4(u, dt, theta);
    } catch (const NanError&) {
      finish_blowup(BlowupCause::NonFinite, u, t);
      return traj;
    }
    if (!next.finite()) {
      finish_blowup(BlowupCause::NonFinite, u, t);
      return traj;
    }
    u = std::move(next);
    t += dt;
    ++step;

    Field ux = deriv(u);
    const double mx = max_value(ux), mn = min_value(ux);
    max_slope_seen = std::max(max_slope_seen, mx);
    min_slope_seen = std::min(min_slope_seen, mn);
    const double slope_mag = std::max(std::abs(mx), std::abs(mn));
    if (slope_mag < 1e3) t_last_below_bracket = t;

    const bool due = (step % config.output_every == 0);
    if (slope_mag >= config.slope_blowup_threshold) {
      record_state(t, u);
      BlowupReport rep;
      rep.cause = BlowupCause::SlopeThreshold;
      rep.t_detect = t_last_below_bracket;
      rep.max_slope = max_slope_seen;
      rep.min_slope = min_slope_seen;
      rep.direction = (std::abs(min_slope_seen) >= max_slope_seen)
                          ? Divergence::Below
                          : Divergence::Above;
      traj.terminal = Terminal::Blowup;
      traj.blowup = rep;
      return traj;
    }
    if (due || config.t_end - t <= 1e-12 * config.t_end) record_state(t, u);
  }
  traj.terminal = Terminal::Completed;
  return traj;
}

Divergence classify_divergence(const Trajectory& traj) {
  if (traj.terminal == Terminal::Completed || !traj.blowup)
    return Divergence::None;
  return traj.blowup->direction;
}

}  // namespace theta
