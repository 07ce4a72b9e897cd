#include "thetawave/diagnostics.hpp"

#include <cmath>

#include "thetawave/dynamics.hpp"
#include "thetawave/lagrangian.hpp"

namespace theta {

Sign classify_sign(const Field& f, double rel_tol) {
  const double tol = rel_tol * sup_abs(f);
  bool has_pos = false, has_neg = false;
  for (double x : f.values()) {
    if (x > tol) has_pos = true;
    if (x < -tol) has_neg = true;
  }
  if (has_pos && has_neg) return Sign::Indefinite;
  return has_neg ? Sign::NonPositive : Sign::NonNegative;
}

std::optional<int> even_ratio_index(double theta) {
  if (!(theta > 1.0) || theta > 2.0) return std::nullopt;
  // theta = 2n/(2n-1)  <=>  n = theta / (2 theta - 2)
  const double nf = theta / (2.0 * theta - 2.0);
  const int n = static_cast<int>(std::lround(nf));
  if (n < 1) return std::nullopt;
  const double back = 2.0 * n / (2.0 * n - 1.0);
  if (std::abs(back - theta) < 1e-9) return n;
  return std::nullopt;
}

DiagnosticsRecord record(const Field& u, double theta,
                         std::optional<Sign> m0_sign) {
  u.require_finite("diagnostics record");
  DiagnosticsRecord d;
  Field m = helmholtz_apply(u);
  Field ux = deriv(u);
  d.mass_u = integrate(u);
  d.mass_m = integrate(m);
  d.h1_sq = norm_h1_sq(u);
  d.m_l2_sq = norm_l2_sq(m);
  d.sup_u = sup_abs(u);
  d.sup_ux = sup_abs(ux);
  d.min_ux = min_value(ux);
  if (theta > 0.0 && theta < 1.0) {
    d.lp_momentum = lp_momentum(m, theta);
    d.lp_is_norm = theta / (1.0 - theta) >= 1.0;
  }
  if (auto n = even_ratio_index(theta)) d.dhh = dhh_invariant(m, *n);
  if (m0_sign && *m0_sign != Sign::Indefinite) {
    const double tol = 1e-10 * std::max(sup_abs(m), 1e-300);
    bool ok = true;
    for (double x : m.values()) {
      if (*m0_sign == Sign::NonNegative && x < -tol) ok = false;
      if (*m0_sign == Sign::NonPositive && x > tol) ok = false;
    }
    d.sign_consistent = ok;
  }
  return d;
}

double lp_momentum(const Field& m, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw UnsupportedExponent(theta);
  const double p = theta / (1.0 - theta);
  double s = 0.0;
  for (double x : m.values()) s += std::pow(std::abs(x), p);
  return s * m.grid().dx;
}

double dhh_invariant(const Field& m, int n) {
  if (n < 1) throw std::invalid_argument("dhh_invariant: n must be >= 1");
  Field mx = deriv(m);
  const double w = 4.0 * static_cast<double>(n) * static_cast<double>(n);
  double s = 0.0;
  for (int i = 0; i < m.n(); ++i) {
    const double mp = (n == 1) ? 1.0 : std::pow(m[i], 2 * n - 2);
    s += w * mp * mx[i] * mx[i] + std::pow(m[i], 2 * n);
  }
  return s * m.grid().dx;
}

double m_l2_rate_residual(const Field& u, double theta) {
  u.require_finite("m_l2_rate_residual");
  Field r = rhs(u, theta);
  Field m = helmholtz_apply(u);
  Field mt = helmholtz_apply(r);
  Field ux = deriv(u);
  double lhs = 0.0, flux_side = 0.0;
  for (int i = 0; i < u.n(); ++i) {
    lhs += 2.0 * m[i] * mt[i];
    flux_side += ux[i] * m[i] * m[i];
  }
  const double dx = u.grid().dx;
  return std::abs(lhs * dx - (3.0 * theta - 2.0) * flux_side * dx);
}

double theta0_energy_residual(const Field& u) {
  u.require_finite("theta0_energy_residual");
  Field r = rhs(u, 0.0);
  Field ux = deriv(u), uxx = deriv2(u);
  Field rx = deriv(r), rxx = deriv2(r);
  double lhs = 0.0, rhs_side = 0.0;
  for (int i = 0; i < u.n(); ++i) {
    lhs += 2.0 * (u[i] * r[i] + 2.0 * ux[i] * rx[i] + uxx[i] * rxx[i]);
    rhs_side += -2.0 * ux[i] * (ux[i] * ux[i] + uxx[i] * uxx[i]);
  }
  const double dx = u.grid().dx;
  return std::abs(lhs * dx - rhs_side * dx);
}

Theta0BoundReport bound_check_theta0(const Trajectory& traj, const Field& m0) {
  const Sign sgn = classify_sign(m0);
  if (sgn == Sign::Indefinite)
    throw std::invalid_argument(
        "bound_check_theta0 requires m0 of definite sign");
  if (traj.states.empty())
    throw std::invalid_argument("bound_check_theta0: empty trajectory");
  const Field& u0 = traj.states.front();
  const double l1_u0 = norm_l1(u0);
  const double h1_0 = norm_h1_sq(u0);

  Theta0BoundReport rep;
  for (size_t i = 0; i < traj.states.size(); ++i) {
    const double t = traj.times[i];
    const Field& u = traj.states[i];
    Field ux = deriv(u);
    Field m = helmholtz_apply(u);
    bool s_ok = sup_abs(ux) <= l1_u0 * (1.0 + 1e-8);
    bool h_ok = norm_h1_sq(u) <= std::exp(t * l1_u0) * h1_0 * (1.0 + 1e-6);
    bool m_ok = std::abs(norm_l1(m) - l1_u0) <= 1e-8 * l1_u0;
    rep.times.push_back(t);
    rep.slope_ok.push_back(s_ok);
    rep.h1_ok.push_back(h_ok);
    rep.m_l1_ok.push_back(m_ok);
    rep.all_ok = rep.all_ok && s_ok && h_ok && m_ok;
  }
  return rep;
}

bool sign_persistence_check(const Trajectory& traj, const Field& m0,
                            double theta, double tol) {
  const double m0max = sup_abs(m0);
  if (m0max == 0.0) return true;
  const double floor = tol;
  const double allowance = tol * m0max * m0max;

  if (theta == 0.0) {
    // characteristics are frozen: compare pointwise on the grid
    for (const Field& u : traj.states) {
      Field m = helmholtz_apply(u);
      for (int i = 0; i < m.n(); ++i) {
        if (std::abs(m0[i]) > floor && m[i] * m0[i] < -allowance) return false;
      }
    }
    return true;
  }
  // transported sign: sample m along characteristics seeded at every
  // eighth grid point
  std::vector<double> seeds;
  for (int i = 0; i < m0.n(); i += 8) seeds.push_back(m0.grid().x(i));
  auto paths = advect(traj, seeds, theta);
  FourierInterpolant m0i(m0);
  for (const auto& p : paths) {
    const double m0a = m0i(p.alpha);
    if (std::abs(m0a) <= floor) continue;
    for (double mv : p.m_along)
      if (mv * m0a < -allowance) return false;
  }
  return true;
}

}  // namespace theta
