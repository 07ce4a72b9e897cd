#include <doctest.h>

#include <cmath>

#include "thetawave/scenarios.hpp"

using namespace theta;

TEST_CASE("peakon handle: values, trivial case, crest motion") {
  PeakonSolution p = peakon(1.0, 1.0);
  CHECK(p.u(0.0, 0.0) == doctest::Approx(1.0));
  // at theta = 1 the crest sits at x = c t
  CHECK(p.u(2.0, 2.0) == doctest::Approx(1.0));
  CHECK(p.u(2.0, 2.5) < 1.0);
  CHECK(p.momentum_mass() == doctest::Approx(2.0));

  PeakonSolution p3 = peakon(1.5, 1.0 / 3.0);
  CHECK(p3.speed == doctest::Approx(0.5));
  CHECK(p3.u(2.0, 1.0) == doctest::Approx(1.5));  // crest at speed*t = 1

  PeakonSolution z = peakon(0.0, 0.5);
  CHECK(z.u(1.0, 0.3) == 0.0);
}

TEST_CASE("smoothed peakon: mass, positivity, peakon limit") {
  Grid g = make_grid(8192, 80.0, -40.0);
  const double c = 1.0;
  double prev = 1e300;
  for (double eps : {0.4, 0.2, 0.1}) {
    SmoothedPeakon sp = smoothed_peakon(c, eps, g);
    CHECK(!sp.under_resolved);
    CHECK(std::abs(integrate(sp.u0) - 2.0 * c) <= 1e-10);
    CHECK(min_value(sp.u0) >= -1e-12 * sup_abs(sp.m0));
    double dist = 0.0;
    for (int i = 0; i < g.n; ++i) {
      const double peak = c * std::exp(-std::abs(g.x(i) - g.center()));
      dist = std::max(dist, std::abs(sp.u0[i] - peak));
    }
    CHECK(dist < prev);
    prev = dist;
  }
  // eps below dx raises the under-resolution flag
  Grid coarse = make_grid(64, 80.0, -40.0);
  CHECK(smoothed_peakon(c, 0.5, coarse).under_resolved);
  CHECK_THROWS_AS(smoothed_peakon(c, -1.0, g), std::invalid_argument);
}

TEST_CASE("from_momentum basics") {
  Grid g = make_grid(64, 2.0 * M_PI, 0.0);
  CHECK(sup_abs(from_momentum(Field(g, 0.0))) == 0.0);
  Field m(g);
  for (int i = 0; i < g.n; ++i) m[i] = 2.0 * std::sin(g.x(i));
  Field u = from_momentum(m);
  for (int i = 0; i < g.n; ++i)
    CHECK(u[i] == doctest::Approx(std::sin(g.x(i))).epsilon(1e-12));
  Grid gl = make_grid(256, 80.0, -40.0);
  Field mg(gl);
  for (int i = 0; i < gl.n; ++i) {
    const double r = gl.x(i) / 2.0;
    mg[i] = std::exp(-r * r);
  }
  CHECK(min_value(from_momentum(mg)) >= -1e-12 * sup_abs(mg));
}

TEST_CASE("odd blow-up data satisfies the hypotheses constructively") {
  Grid g = make_grid(1024, 80.0, -40.0);
  OddBlowupData d = odd_blowup_data(1.0, 1.0, g, 0.0);
  const int i0 = g.n / 2;
  CHECK(g.x(i0) == doctest::Approx(0.0));
  CHECK(d.u0[i0] == doctest::Approx(0.0).epsilon(1e-12));
  const double su = sup_abs(d.u0);
  for (int j = 1; j < g.n / 2; ++j) {
    const int ip = (i0 + j) % g.n, im = (i0 - j + g.n) % g.n;
    CHECK(std::abs(d.u0[ip] + d.u0[im]) <= 1e-12 * su);
    CHECK(std::abs(d.m0[ip] + d.m0[im]) <= 1e-12 * sup_abs(d.m0));
  }
  for (int i = 0; i < g.n; ++i) {
    int rel = i - i0;
    if (rel > g.n / 2) rel -= g.n;
    if (rel < -g.n / 2) rel += g.n;
    CHECK(static_cast<double>(rel) * g.dx * d.m0[i] <= 0.0);
  }
  CHECK(d.report.u_x_at_xstar < 0.0);
  CHECK(d.report.momentum_sign_condition);

  // slope at the origin against an independent line-kernel quadrature
  const int nq = 65536;
  const double a = -40.0, b = 40.0, h = (b - a) / nq;
  double s = 0.0;
  for (int i = 0; i < nq; ++i) {
    const double y = a + (i + 0.5) * h;
    s += GreenKernel::line_deriv(0.0 - y) * (-1.0 * y * std::exp(-y * y)) * h;
  }
  CHECK(d.report.u_x_at_xstar == doctest::Approx(s).epsilon(1e-6));

  // rescaled constructor hits the requested slope exactly
  OddBlowupData ds = odd_blowup_for_slope(-2.0, 1.0, g, 0.0);
  CHECK(ds.report.u_x_at_xstar == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("scenario mass identity int u0 = int m0") {
  Grid g = make_grid(256, 80.0, -40.0);
  for (const char* kind : {"smoothed_peakon", "from_momentum", "odd_blowup"}) {
    ScenarioSpec spec;
    spec.kind = kind;
    spec.params = {{"c", 1.0}, {"eps", 1.0}, {"amplitude", 0.7},
                   {"width", 2.0}};
    BuiltScenario sc = build_scenario(spec, g, 0.3);
    CHECK(std::abs(integrate(sc.u0) - integrate(sc.m0)) <=
          1e-10 * (1.0 + std::abs(integrate(sc.m0))));
  }
}

TEST_CASE("validate assigns regimes with the documented precedence") {
  Grid g = make_grid(512, 80.0, -40.0);
  SmoothedPeakon sp = smoothed_peakon(1.0, 1.0, g);
  HypothesisReport r1 = validate(sp.u0, 1.0 / 3.0, &sp.m0);
  CHECK(r1.regime == Regime::GlobalBySign);
  CHECK(r1.m0_sign == Sign::NonNegative);

  OddBlowupData d = odd_blowup_for_slope(-1.0, 1.0, g, 0.0);
  HypothesisReport r2 = validate(d.u0, 0.3, &d.m0);
  CHECK(r2.regime == Regime::BlowupSlopeCondition);
  CHECK(r2.odd_about.has_value());
  CHECK(r2.momentum_sign_condition);

  HypothesisReport r3 = validate(d.u0, 0.6, &d.m0);
  CHECK(r3.regime == Regime::GlobalByRange);

  HypothesisReport r4 = validate(d.u0, 0.2, &d.m0);
  CHECK(r4.regime == Regime::BlowupSignCondition);

  HypothesisReport r5 = validate(d.u0, 4.0 / 3.0, &d.m0);
  CHECK(r5.regime == Regime::GlobalByEvenRatio);

  HypothesisReport r6 = validate(d.u0, -0.5, &d.m0);
  CHECK(r6.regime == Regime::Unclassified);

  // purity: identical inputs give identical reports
  HypothesisReport r7 = validate(d.u0, 0.3, &d.m0);
  CHECK(r7.regime == r2.regime);
  CHECK(r7.u_x_at_xstar == r2.u_x_at_xstar);
}

TEST_CASE("build_scenario rejects unknown kinds") {
  Grid g = make_grid(64, 10.0, 0.0);
  ScenarioSpec spec;
  spec.kind = "peakon";  // the kinked profile is never fed to the solver
  CHECK_THROWS_AS(build_scenario(spec, g, 0.3), std::invalid_argument);
}
