#include "thetawave/scenarios.hpp"

#include <cmath>

#include "thetawave/dynamics.hpp"
#include "thetawave/io.hpp"

namespace theta {

PeakonSolution peakon(double c, double theta) {
  PeakonSolution p;
  p.c = c;
  p.speed = theta * c;
  return p;
}

SmoothedPeakon smoothed_peakon(double c, double eps, const Grid& grid) {
  if (!(eps > 0)) throw std::invalid_argument("smoothed_peakon: eps <= 0");
  SmoothedPeakon out{Field(grid), Field(grid), eps < grid.dx};
  const double xc = grid.center();
  const double amp = 2.0 * c / (eps * std::sqrt(M_PI));
  for (int i = 0; i < grid.n; ++i) {
    const double r = (grid.x(i) - xc) / eps;
    out.m0[i] = amp * std::exp(-r * r);
  }
  out.u0 = from_momentum(out.m0);
  return out;
}

Field from_momentum(const Field& m0) {
  m0.require_finite("from_momentum");
  return helmholtz_solve(m0);
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::GlobalBySign: return "global-by-sign";
    case Regime::GlobalByRange: return "global-by-range";
    case Regime::GlobalByEvenRatio: return "global-by-even-ratio";
    case Regime::BlowupSignCondition: return "blowup-i";
    case Regime::BlowupSlopeCondition: return "blowup-ii";
    case Regime::Unclassified: return "unclassified";
  }
  return "unclassified";
}

OddBlowupData odd_blowup_data(double amplitude, double width, const Grid& grid,
                              double x_star) {
  if (!(amplitude > 0))
    throw std::invalid_argument("odd_blowup_data: amplitude must be positive");
  if (!(width > 0))
    throw std::invalid_argument("odd_blowup_data: width must be positive");
  int i_star = static_cast<int>(std::lround((x_star - grid.origin) / grid.dx));
  i_star = ((i_star % grid.n) + grid.n) % grid.n;

  OddBlowupData d{Field(grid), Field(grid), {}};
  for (int i = 0; i < grid.n; ++i) {
    // signed displacement as an exact multiple of dx, reduced to the box
    int rel = i - i_star;
    if (rel > grid.n / 2) rel -= grid.n;
    if (rel < -grid.n / 2) rel += grid.n;
    const double s = static_cast<double>(rel) * grid.dx;
    const double r = s / width;
    d.m0[i] = -amplitude * s * std::exp(-r * r);
  }
  d.u0 = from_momentum(d.m0);
  d.report.m0_sign = classify_sign(d.m0);
  d.report.odd_about = grid.x(i_star);
  d.report.momentum_sign_condition = true;  // holds by construction
  d.report.u_x_at_xstar = deriv(d.u0)[i_star];
  return d;
}

OddBlowupData odd_blowup_for_slope(double slope_target, double width,
                                   const Grid& grid, double x_star) {
  if (!(slope_target < 0))
    throw std::invalid_argument("odd_blowup_for_slope: target must be < 0");
  OddBlowupData unit = odd_blowup_data(1.0, width, grid, x_star);
  const double s1 = unit.report.u_x_at_xstar;
  if (!(s1 < 0))
    throw std::runtime_error("odd_blowup_for_slope: unit datum has s >= 0");
  return odd_blowup_data(slope_target / s1, width, grid, x_star);
}

namespace {

// A periodic function odd about the box center is also odd about the
// boundary point; prefer the center whose slope is negative since that is
// the one carrying the blow-up hypotheses.
std::optional<double> detect_odd_center(const Field& u0) {
  const Grid& g = u0.grid();
  const double tol = 1e-10 * std::max(sup_abs(u0), 1e-300);
  std::vector<int> valid;
  for (int shift : {g.n / 2, 0}) {
    bool odd = std::abs(u0[shift]) <= tol;
    for (int j = 1; j < g.n / 2 && odd; ++j) {
      const int ip = (shift + j) % g.n;
      const int im = ((shift - j) % g.n + g.n) % g.n;
      if (std::abs(u0[ip] + u0[im]) > tol) odd = false;
    }
    if (odd) valid.push_back(shift);
  }
  if (valid.empty()) return std::nullopt;
  Field ux = deriv(u0);
  for (int shift : valid)
    if (ux[shift] < 0.0) return g.x(shift);
  return g.x(valid.front());
}

}  // namespace

HypothesisReport validate(const Field& u0, double theta, const Field* m0p) {
  HypothesisReport rep;
  Field m0 = m0p ? *m0p : helmholtz_apply(u0);
  rep.m0_sign = classify_sign(m0);
  rep.odd_about = detect_odd_center(u0);

  const Grid& g = u0.grid();
  if (rep.odd_about) {
    const double xs = *rep.odd_about;
    int i_star = static_cast<int>(std::lround((xs - g.origin) / g.dx));
    i_star = ((i_star % g.n) + g.n) % g.n;
    rep.u_x_at_xstar = deriv(u0)[i_star];
    const double tol = 1e-12 * std::max(sup_abs(m0), 1e-300);
    bool cond = true;
    for (int i = 0; i < g.n && cond; ++i) {
      int rel = i - i_star;
      if (rel > g.n / 2) rel -= g.n;
      if (rel < -g.n / 2) rel += g.n;
      if (static_cast<double>(rel) * g.dx * m0[i] > tol) cond = false;
    }
    rep.momentum_sign_condition = cond;
  }

  const bool sign_definite = rep.m0_sign != Sign::Indefinite;
  if (theta != 0.0 && sign_definite) {
    rep.regime = Regime::GlobalBySign;
    rep.applicable_theorems.push_back("global-regularity i");
  } else if (theta >= 0.5 && theta <= 1.0) {
    rep.regime = Regime::GlobalByRange;
    rep.applicable_theorems.push_back("global-regularity ii");
  } else if (even_ratio_index(theta)) {
    rep.regime = Regime::GlobalByEvenRatio;
    rep.applicable_theorems.push_back("global-regularity iii");
  } else if (theta > 0.0 && theta <= 0.25 && rep.odd_about &&
             rep.momentum_sign_condition && rep.u_x_at_xstar < 0.0) {
    rep.regime = Regime::BlowupSignCondition;
    rep.applicable_theorems.push_back("blow-up i");
  } else if (theta >= 0.25 && theta < 0.5 && rep.odd_about &&
             rep.u_x_at_xstar < 0.0) {
    rep.regime = Regime::BlowupSlopeCondition;
    rep.applicable_theorems.push_back("blow-up ii");
  } else if (theta == 0.0 && sign_definite) {
    rep.regime = Regime::GlobalBySign;
    rep.applicable_theorems.push_back("borderline global existence");
  } else {
    rep.regime = Regime::Unclassified;
  }
  return rep;
}

BuiltScenario build_scenario(const ScenarioSpec& spec, const Grid& grid,
                             double theta) {
  auto get = [&](const std::string& key, double dflt) {
    auto it = spec.params.find(key);
    return it == spec.params.end() ? dflt : it->second;
  };
  BuiltScenario out{Field(grid), Field(grid), {}};
  if (spec.kind == "zero") {
    // zero fields
  } else if (spec.kind == "smoothed_peakon") {
    SmoothedPeakon sp =
        smoothed_peakon(get("c", 1.0), get("eps", 1.0), grid);
    out.u0 = sp.u0;
    out.m0 = sp.m0;
  } else if (spec.kind == "from_momentum") {
    const double amp = get("amplitude", 1.0);
    const double width = get("width", 2.0);
    const double center = get("center", grid.center());
    for (int i = 0; i < grid.n; ++i) {
      const double r = (grid.x(i) - center) / width;
      out.m0[i] = amp * std::exp(-r * r);
    }
    out.u0 = from_momentum(out.m0);
  } else if (spec.kind == "odd_blowup") {
    const double width = get("width", 1.0);
    const double xs = get("x_star", grid.center());
    OddBlowupData d =
        spec.params.count("slope_target")
            ? odd_blowup_for_slope(get("slope_target", -1.0), width, grid, xs)
            : odd_blowup_data(get("amplitude", 1.0), width, grid, xs);
    return {d.u0, d.m0, validate(d.u0, theta, &d.m0)};
  } else if (spec.kind == "custom") {
    FieldSnapshot snap = read_field_snapshot(spec.custom_file);
    if (!(snap.field.grid() == grid))
      throw std::invalid_argument("custom scenario grid mismatch");
    out.m0 = snap.field;
    out.u0 = from_momentum(out.m0);
  } else {
    throw std::invalid_argument("unknown scenario kind: " + spec.kind);
  }
  out.report = validate(out.u0, theta, &out.m0);
  return out;
}

}  // namespace theta
