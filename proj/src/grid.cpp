#include "thetawave/grid.hpp"

namespace theta {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid make_grid(int n, double length, double origin) {
  if (n < 8 || !power_of_two(n))
    throw std::invalid_argument("make_grid: n must be a power of two >= 8");
  if (!(length > 0) || !std::isfinite(length))
    throw std::invalid_argument("make_grid: length must be positive");
  if (!std::isfinite(origin))
    throw std::invalid_argument("make_grid: origin must be finite");
  Grid g;
  g.n = n;
  g.length = length;
  g.origin = origin;
  g.dx = length / static_cast<double>(n);
  return g;
}

Field& Field::operator+=(const Field& o) {
  for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}
Field& Field::operator-=(const Field& o) {
  for (size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}
Field& Field::operator*=(double a) {
  for (double& x : v_) x *= a;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double a, Field f) { return f *= a; }

Field pointwise(const Field& a, const Field& b) {
  Field out(a.grid());
  for (int i = 0; i < a.n(); ++i) out[i] = a[i] * b[i];
  return out;
}

Field axpby(double c0, const Field& a, double c1, const Field& b) {
  Field out(a.grid());
  for (int i = 0; i < a.n(); ++i) out[i] = c0 * a[i] + c1 * b[i];
  return out;
}

double sup_abs(const Field& f) {
  double m = 0;
  for (double x : f.values()) m = std::max(m, std::abs(x));
  return m;
}
double min_value(const Field& f) {
  double m = f[0];
  for (double x : f.values()) m = std::min(m, x);
  return m;
}
double max_value(const Field& f) {
  double m = f[0];
  for (double x : f.values()) m = std::max(m, x);
  return m;
}

double GreenKernel::periodic(double x, double L) {
  double r = std::fmod(x, L);
  if (r < -0.5 * L) r += L;
  if (r > 0.5 * L) r -= L;
  return std::cosh(0.5 * L - std::abs(r)) / (2.0 * std::sinh(0.5 * L));
}

}  // namespace theta
