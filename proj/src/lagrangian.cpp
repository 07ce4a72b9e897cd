#include "thetawave/lagrangian.hpp"

#include <array>
#include <cmath>

namespace theta {

namespace {

Spectrum derivative_spectrum(const Spectrum& s) {
  Spectrum out = s;
  const int ny = s.grid.n / 2;
  for (int k = 0; k <= ny; ++k) {
    const std::complex<double> ik(0.0, s.wavenumber(k));
    out.c[static_cast<size_t>(k)] *= (k == ny) ? 0.0 : ik;
  }
  return out;
}

Spectrum helmholtz_spectrum(const Spectrum& s) {
  Spectrum out = s;
  for (int k = 0; k <= s.grid.n / 2; ++k) {
    const double kk = s.wavenumber(k);
    out.c[static_cast<size_t>(k)] *= 1.0 + kk * kk;
  }
  return out;
}

struct HermiteWeights {
  double w_u0, w_r0, w_u1, w_r1;
};

HermiteWeights hermite_weights(double s, double h) {
  const double h00 = (2 * s - 3) * s * s + 1;
  const double h10 = ((s - 2) * s + 1) * s;
  const double h01 = (3 - 2 * s) * s * s;
  const double h11 = (s - 1) * s * s;
  return {h00, h * h10, h01, h * h11};
}

}  // namespace

std::vector<CharacteristicPath> advect(const Trajectory& traj,
                                       const std::vector<double>& seeds,
                                       double theta) {
  if (traj.states.size() < 2)
    throw std::invalid_argument("advect: trajectory has fewer than 2 states");
  const Grid& g = traj.states.front().grid();

  // Per-snapshot interpolants of u, u_t, u_x, u_tx and m; time reconstruction
  // between snapshots is cubic Hermite, evaluated by blending point values
  // (the interpolants are linear in the coefficients).
  const size_t nt = traj.states.size();
  std::vector<FourierInterpolant> iu(nt), ir(nt), iux(nt), irx(nt), im(nt);
  for (size_t i = 0; i < nt; ++i) {
    Spectrum us = fft(traj.states[i]);
    Spectrum rs = fft(rhs(traj.states[i], theta));
    iu[i] = FourierInterpolant(us);
    ir[i] = FourierInterpolant(rs);
    iux[i] = FourierInterpolant(derivative_spectrum(us));
    irx[i] = FourierInterpolant(derivative_spectrum(rs));
    im[i] = FourierInterpolant(helmholtz_spectrum(us));
  }

  const double slope_stop = 1e6;
  auto wrap = [&](double xx) {
    double r = std::fmod(xx - g.origin, g.length);
    if (r < 0) r += g.length;
    return g.origin + r;
  };

  std::vector<CharacteristicPath> paths(seeds.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (size_t sidx = 0; sidx < seeds.size(); ++sidx) {
    CharacteristicPath p;
    p.alpha = seeds[sidx];
    double x = p.alpha, F = 1.0, G = 0.0;
    auto push = [&](double t, size_t snap) {
      p.times.push_back(t);
      p.x_unwrapped.push_back(x);
      p.x.push_back(wrap(x));
      p.jacobian.push_back(F);
      p.m_along.push_back(im[snap](wrap(x)));
      p.ux_accum.push_back(G);
    };
    push(traj.times[0], 0);
    for (size_t i = 0; i + 1 < nt && !p.truncated; ++i) {
      const double h = traj.times[i + 1] - traj.times[i];
      if (!(h > 0)) continue;
      auto stage = [&](double s, double xc, double Fc) -> std::array<double, 3> {
        const HermiteWeights w = hermite_weights(s, h);
        const double xw = wrap(xc);
        const double uv = w.w_u0 * iu[i](xw) + w.w_r0 * ir[i](xw) +
                          w.w_u1 * iu[i + 1](xw) + w.w_r1 * ir[i + 1](xw);
        const double uxv = w.w_u0 * iux[i](xw) + w.w_r0 * irx[i](xw) +
                           w.w_u1 * iux[i + 1](xw) + w.w_r1 * irx[i + 1](xw);
        return {theta * uv, theta * uxv * Fc, uxv};
      };
      const auto k1 = stage(0.0, x, F);
      const auto k2 = stage(0.5, x + 0.5 * h * k1[0], F + 0.5 * h * k1[1]);
      const auto k3 = stage(0.5, x + 0.5 * h * k2[0], F + 0.5 * h * k2[1]);
      const auto k4 = stage(1.0, x + h * k3[0], F + h * k3[1]);
      x += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
      F += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
      G += h / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
      if (F < 1e-6 || std::abs(iux[i + 1](wrap(x))) > slope_stop) {
        p.truncated = true;
        break;
      }
      push(traj.times[i + 1], i + 1);
    }
    paths[sidx] = std::move(p);
  }
  return paths;
}

double invariant_residual(const std::vector<CharacteristicPath>& paths,
                          const Field& m0, double theta) {
  const double scale = sup_abs(m0);
  if (scale == 0.0) return 0.0;
  FourierInterpolant m0i(m0);
  double worst = 0.0;
  for (const auto& p : paths) {
    const double m0a = m0i(p.alpha);
    for (size_t i = 0; i < p.times.size(); ++i) {
      double lhs;
      if (theta != 0.0) {
        lhs = p.m_along[i] * std::pow(p.jacobian[i], 1.0 / theta - 1.0);
      } else {
        lhs = p.m_along[i] * std::exp(p.ux_accum[i]);
      }
      worst = std::max(worst, std::abs(lhs - m0a));
    }
  }
  return worst / scale;
}

RiccatiTrace riccati_trace(const Trajectory& traj, double x_star,
                           double theta) {
  if (traj.states.empty())
    throw std::invalid_argument("riccati_trace: empty trajectory");
  const Field& u0 = traj.states.front();
  const Grid& g = u0.grid();
  // snap x_star to the nearest grid point and verify odd symmetry there
  int i_star = static_cast<int>(std::lround((x_star - g.origin) / g.dx));
  i_star = ((i_star % g.n) + g.n) % g.n;
  const double xs = g.x(i_star);
  const double tol = 1e-10 * std::max(sup_abs(u0), 1e-300);
  for (int j = 1; j < g.n / 2; ++j) {
    const int ip = (i_star + j) % g.n;
    const int im_ = ((i_star - j) % g.n + g.n) % g.n;
    if (std::abs(u0[ip] + u0[im_]) > tol)
      throw std::invalid_argument(
          "riccati_trace: initial data is not odd about x_star");
  }

  RiccatiTrace tr;
  tr.x_star = xs;
  tr.theta = theta;
  tr.regime = (theta < 0.25) ? RiccatiRegime::SignCondition
                             : RiccatiRegime::SlopeOnly;
  tr.kappa = (theta < 0.25) ? theta : (0.5 - theta);

  const double slope_stop = 1e6;
  for (size_t i = 0; i < traj.states.size(); ++i) {
    const Field& u = traj.states[i];
    Field ux = deriv(u);
    if (sup_abs(ux) > slope_stop) break;
    const double d = ux[i_star];
    const double ddot = deriv(rhs(u, theta))[i_star];
    tr.times.push_back(traj.times[i]);
    tr.d.push_back(d);
    tr.lhs_residual.push_back(ddot + tr.kappa * d * d);
  }
  const double d0 = tr.d.empty() ? 0.0 : tr.d.front();
  if (d0 < 0.0 && theta > 0.0 && theta < 0.5)
    tr.t_star = blowup_bound(u0, xs, theta);
  return tr;
}

double blowup_bound(const Field& u0, double x_star, double theta) {
  if (!(theta > 0.0 && theta < 0.5))
    throw NoBlowupBound("blowup_bound: theta outside (0, 1/2)");
  const Grid& g = u0.grid();
  int i_star = static_cast<int>(std::lround((x_star - g.origin) / g.dx));
  i_star = ((i_star % g.n) + g.n) % g.n;
  const double s = deriv(u0)[i_star];
  if (!(s < 0.0))
    throw NoBlowupBound("blowup_bound: u_x(0, x*) must be negative");
  if (theta <= 0.25) return -1.0 / (theta * s);
  return 2.0 / ((2.0 * theta - 1.0) * s);
}

bool kernel_domination_check(const Field& u, double x_star, double theta) {
  const Grid& g = u.grid();
  int i_star = static_cast<int>(std::lround((x_star - g.origin) / g.dx));
  i_star = ((i_star % g.n) + g.n) % g.n;
  Field ux = deriv(u);
  Field integrand(g);
  for (int i = 0; i < g.n; ++i)
    integrand[i] =
        (1.0 - 4.0 * theta) * ux[i] * ux[i] + (theta - 1.0) * u[i] * u[i];
  const double lhs = green_convolve(integrand)[i_star];
  const double rhs_val = (1.0 - 4.0 * theta) *
                         (ux[i_star] * ux[i_star] - u[i_star] * u[i_star]);
  const double scale =
      sup_abs(u) * sup_abs(u) + sup_abs(ux) * sup_abs(ux) + 1e-300;
  return lhs <= rhs_val + 1e-10 * scale;
}

}  // namespace theta
