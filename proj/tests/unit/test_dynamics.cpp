#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "thetawave/dynamics.hpp"
#include "thetawave/scenarios.hpp"

using namespace theta;

namespace {

Field low_mode_field(const Grid& g, unsigned seed, int kmax, double amp) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  Field out(g);
  for (int k = 1; k <= kmax; ++k) {
    const double a = dist(rng), b = dist(rng);
    const double decay = std::exp(-0.4 * k);
    for (int i = 0; i < g.n; ++i) {
      const double ph = 2.0 * M_PI * k * (g.x(i) - g.origin) / g.length;
      out[i] += amp * decay * (a * std::cos(ph) + b * std::sin(ph));
    }
  }
  return out;
}

Field gaussian_momentum_data(const Grid& g, double amp, double width) {
  Field m0(g);
  for (int i = 0; i < g.n; ++i) {
    const double r = (g.x(i) - g.center()) / width;
    m0[i] = amp * std::exp(-r * r);
  }
  return helmholtz_solve(m0);
}

// the theta = 0 form u_t = d/dx Q*(u_x^2/2 - u^2/2), coded directly
Field theta0_rhs_direct(const Field& u) {
  Field ux = deriv(u);
  Field arg(u.grid());
  Field u2 = dealias(pointwise(u, u));
  Field ux2 = dealias(pointwise(ux, ux));
  for (int i = 0; i < u.n(); ++i) arg[i] = 0.5 * ux2[i] - 0.5 * u2[i];
  return deriv(green_convolve(arg));
}

// the standard Camassa-Holm right-hand side
// u_t = -[u u_x + d/dx Q*(u^2 + u_x^2/2)], coded with its own steps
Field camassa_holm_rhs(const Field& u) {
  Field ux = deriv(u);
  Field adv = dealias(pointwise(u, ux));
  Field u2 = dealias(pointwise(u, u));
  Field ux2 = dealias(pointwise(ux, ux));
  Field conv = green_convolve(axpby(1.0, u2, 0.5, ux2));
  Field out = deriv(conv);
  out += adv;
  out *= -1.0;
  return out;
}

// generic B-form right-hand side v_t = -v v_x - d/dx Q*B(v, v_x),
// B = (1/theta - 1) v^2/2 + (4 - 1/theta) v_x^2/2
Field b_form_rhs(const Field& v, double th) {
  Field vx = deriv(v);
  Field adv = dealias(pointwise(v, vx));
  Field v2 = dealias(pointwise(v, v));
  Field vx2 = dealias(pointwise(vx, vx));
  Field conv = green_convolve(
      axpby(0.5 * (1.0 / th - 1.0), v2, 0.5 * (4.0 - 1.0 / th), vx2));
  Field out = deriv(conv);
  out += adv;
  out *= -1.0;
  return out;
}

}  // namespace

TEST_CASE("theta classification") {
  CHECK(classify_theta(0.0) == ThetaClass::BorderlineZero);
  CHECK(classify_theta(0.1) == ThetaClass::BlowupSignRange);
  CHECK(classify_theta(0.25) == ThetaClass::BlowupSlopeRange);
  CHECK(classify_theta(0.4) == ThetaClass::BlowupSlopeRange);
  CHECK(classify_theta(0.5) == ThetaClass::GlobalRange);
  CHECK(classify_theta(1.0) == ThetaClass::GlobalRange);
  CHECK(classify_theta(2.0) == ThetaClass::EvenRatio);
  CHECK(classify_theta(4.0 / 3.0) == ThetaClass::EvenRatio);
  CHECK(classify_theta(1.7) == ThetaClass::Other);
  CHECK(classify_theta(-0.3) == ThetaClass::Other);
}

TEST_CASE("flux on trivial states") {
  Grid g = make_grid(64, 10.0, 0.0);
  CHECK(sup_abs(flux(Field(g, 0.0), 0.7)) == 0.0);
  for (double th : {0.0, 0.25, 1.0, 2.0}) {
    Field F = flux(Field(g, 1.5), th);
    for (int i = 0; i < g.n; ++i)
      CHECK(F[i] == doctest::Approx(0.5 * 1.5 * 1.5).epsilon(1e-13));
  }
}

TEST_CASE("theta = 0 rhs equals the borderline form") {
  Grid g = make_grid(128, 40.0, -20.0);
  Field u = gaussian_momentum_data(g, 0.8, 2.0);
  Field a = rhs(u, 0.0), b = theta0_rhs_direct(u);
  for (int i = 0; i < g.n; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-13);
}

TEST_CASE("theta = 1/3 rhs is one third of the Camassa-Holm rhs") {
  Grid g = make_grid(256, 80.0, -40.0);
  Field u = low_mode_field(g, 3, 10, 0.4);
  Field lhs = rhs(u, 1.0 / 3.0);
  Field ch = camassa_holm_rhs(u);
  for (int i = 0; i < g.n; ++i)
    CHECK(std::abs(lhs[i] - ch[i] / 3.0) <= 1e-12);
}

TEST_CASE("cfl_dt formula") {
  Grid g = make_grid(64, 6.4, 0.0);  // dx = 0.1
  SUBCASE("zero field activates the floor") {
    Field z(g, 0.0);
    CHECK(cfl_dt(z, 0.5, 0.5, 4.0) == doctest::Approx(4.0));  // capped by t_end
    CHECK(cfl_dt(z, 0.5, 0.5) == doctest::Approx(0.5 * 0.1 / 1e-8));
  }
  SUBCASE("advective speed") {
    Field u(g, 2.0);
    CHECK(cfl_dt(u, 1.0, 0.5, 100.0) == doctest::Approx(0.025).epsilon(1e-14));
  }
  SUBCASE("halving dx halves dt") {
    Grid g2 = make_grid(128, 6.4, 0.0);
    Field u(g, 2.0), u2(g2, 2.0);
    CHECK(cfl_dt(u2, 1.0, 0.5, 100.0) ==
          doctest::Approx(0.5 * cfl_dt(u, 1.0, 0.5, 100.0)).epsilon(1e-14));
  }
}

TEST_CASE("step_rk4 fixed points and NaN stage errors") {
  Grid g = make_grid(64, 10.0, 0.0);
  Field z(g, 0.0);
  CHECK(sup_abs(step_rk4(z, 0.1, 0.3)) == 0.0);
  Field c(g, 2.0);
  Field cs = step_rk4(c, 0.1, 0.7);
  for (int i = 0; i < g.n; ++i) CHECK(std::abs(cs[i] - 2.0) <= 5e-14);
  Field bad(g, 1.0);
  bad[5] = std::nan("");
  CHECK_THROWS_AS(step_rk4(bad, 0.1, 0.3), NanError);
}

TEST_CASE("step_rk4 shows fourth-order self convergence") {
  Grid g = make_grid(128, 80.0, -40.0);
  Field u0 = gaussian_momentum_data(g, 0.5, 3.0);
  const double theta_v = 1.0 / 3.0;
  auto advance = [&](double dt, long n) {
    Field u = u0;
    for (long i = 0; i < n; ++i) u = step_rk4(u, dt, theta_v);
    return u;
  };
  const double dt = 0.05;
  Field ref = advance(dt / 16.0, 320);
  double e1 = sup_abs(advance(dt, 20) - ref);
  double e2 = sup_abs(advance(dt / 2, 40) - ref);
  double e4 = sup_abs(advance(dt / 4, 80) - ref);
  CHECK(std::log2(e1 / e2) >= 3.7);
  CHECK(std::log2(e2 / e4) >= 3.7);
}

TEST_CASE("evolve: zero data completes with zero states") {
  Grid g = make_grid(64, 20.0, -10.0);
  SimConfig cfg;
  cfg.theta = 0.25;
  cfg.t_end = 0.5;
  Trajectory tr = evolve(Field(g, 0.0), cfg);
  CHECK(tr.terminal == Terminal::Completed);
  for (const Field& u : tr.states) CHECK(sup_abs(u) == 0.0);
  CHECK(classify_divergence(tr) == Divergence::None);
}

TEST_CASE("evolve is deterministic bit for bit") {
  Grid g = make_grid(128, 80.0, -40.0);
  Field u0 = gaussian_momentum_data(g, 0.5, 3.0);
  SimConfig cfg;
  cfg.theta = 2.0 / 3.0;
  cfg.t_end = 0.4;
  cfg.cfl = 0.2;
  Trajectory a = evolve(u0, cfg), b = evolve(u0, cfg);
  REQUIRE(a.states.size() == b.states.size());
  for (size_t i = 0; i < a.states.size(); ++i) {
    CHECK(std::memcmp(a.states[i].values().data(), b.states[i].values().data(),
                      sizeof(double) * static_cast<size_t>(g.n)) == 0);
  }
}

TEST_CASE("evolve: mass conservation across theta") {
  Grid g = make_grid(256, 80.0, -40.0);
  Field u0 = gaussian_momentum_data(g, 0.5, 3.0);
  const double mass0 = integrate(u0);
  for (double th : {0.0, 0.25, 1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0}) {
    SimConfig cfg;
    cfg.theta = th;
    cfg.t_end = 1.0;
    cfg.cfl = 0.2;
    cfg.output_every = 8;
    Trajectory tr = evolve(u0, cfg);
    REQUIRE(tr.terminal == Terminal::Completed);
    for (const auto& d : tr.diagnostics)
      CHECK(std::abs(d.mass_u - mass0) <= 1e-10 * (1.0 + std::abs(mass0)));
  }
}

TEST_CASE("evolve: translation equivariance for grid shifts") {
  Grid g = make_grid(128, 80.0, -40.0);
  Field u0 = gaussian_momentum_data(g, 0.5, 3.0);
  const double a = 16 * g.dx;
  Field u0s = shift(u0, a);
  SimConfig cfg;
  cfg.theta = 1.0 / 3.0;
  cfg.t_end = 0.5;
  cfg.cfl = 0.2;
  Field end1 = shift(evolve(u0, cfg).states.back(), a);
  Field end2 = evolve(u0s, cfg).states.back();
  for (int i = 0; i < g.n; ++i) CHECK(std::abs(end1[i] - end2[i]) <= 1e-10);
}

TEST_CASE("evolve: scaling symmetry against the B-form clock") {
  Grid g = make_grid(128, 80.0, -40.0);
  Field u0 = gaussian_momentum_data(g, 0.5, 3.0);
  for (double th : {1.0 / 3.0, 0.25}) {
    const double t_end = 1.0;
    const double dt = 0.01;
    Field u = u0;
    const long n = static_cast<long>(std::lround(t_end / dt));
    for (long i = 0; i < n; ++i) u = step_rk4(u, dt, th);
    // B-form: same state reached at tau = theta t with the rescaled clock
    Field v = u0;
    const double dtau = th * dt;
    for (long i = 0; i < n; ++i) {
      Field k1 = b_form_rhs(v, th);
      Field k2 = b_form_rhs(axpby(1.0, v, 0.5 * dtau, k1), th);
      Field k3 = b_form_rhs(axpby(1.0, v, 0.5 * dtau, k2), th);
      Field k4 = b_form_rhs(axpby(1.0, v, dtau, k3), th);
      for (int j = 0; j < v.n(); ++j)
        v[j] += dtau / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    }
    for (int j = 0; j < g.n; ++j) CHECK(std::abs(u[j] - v[j]) <= 1e-6);
  }
}

TEST_CASE("evolve: odd data blows up before the comparison bound") {
  Grid g = make_grid(1024, 40.0, -20.0);
  OddBlowupData d = odd_blowup_for_slope(-2.0, 1.0, g, 0.0);
  SimConfig cfg;
  cfg.theta = 0.25;
  cfg.t_end = 10.0;
  cfg.cfl = 0.25;
  cfg.slope_blowup_threshold = 5.5;
  cfg.output_every = 16;
  Trajectory tr = evolve(d.u0, cfg);
  REQUIRE(tr.terminal == Terminal::Blowup);
  // comparison bound in the equation's own clock: -1/(theta s) = 2
  CHECK(tr.blowup->t_detect < 2.0);
  CHECK(classify_divergence(tr) == Divergence::Below);
}

TEST_CASE("classify_divergence from recorded extrema") {
  Trajectory tr;
  tr.terminal = Terminal::Blowup;
  BlowupReport rep;
  rep.max_slope = 9.0;
  rep.min_slope = -0.5;
  rep.direction = Divergence::Above;
  tr.blowup = rep;
  CHECK(classify_divergence(tr) == Divergence::Above);
  tr.blowup->direction = Divergence::Below;
  CHECK(classify_divergence(tr) == Divergence::Below);
}

TEST_CASE("theta = 2/3 conserves the momentum L2 norm") {
  Grid g = make_grid(256, 80.0, -40.0);
  Field u0 = gaussian_momentum_data(g, 0.5, 3.0);
  SimConfig cfg;
  cfg.theta = 2.0 / 3.0;
  cfg.t_end = 1.0;
  cfg.cfl = 0.05;
  cfg.output_every = 100000;
  Trajectory tr = evolve(u0, cfg);
  REQUIRE(tr.terminal == Terminal::Completed);
  const double i0 = tr.diagnostics.front().m_l2_sq;
  const double iT = tr.diagnostics.back().m_l2_sq;
  CHECK(std::abs(iT - i0) <= 1e-8 * i0);
}
