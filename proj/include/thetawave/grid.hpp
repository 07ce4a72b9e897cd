#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace theta {

// Uniform periodic grid on [origin, origin + length); stands in for the
// real line with a box large enough that e^{-L/2} is negligible.
struct Grid {
  int n = 0;          // number of points, power of two >= 8
  double length = 0;  // box length L
  double origin = 0;  // left endpoint
  double dx = 0;      // spacing length/n

  double x(int i) const { return origin + dx * static_cast<double>(i); }
  double center() const { return origin + 0.5 * length; }
  bool operator==(const Grid&) const = default;
};

Grid make_grid(int n, double length, double origin);

class NanError : public std::runtime_error {
 public:
  explicit NanError(const std::string& where)
      : std::runtime_error("non-finite value in " + where) {}
};

// Real-valued grid function. Value semantics; safe to copy across threads.
class Field {
 public:
  Field() = default;
  Field(const Grid& grid, double fill = 0.0)
      : grid_(grid), v_(static_cast<size_t>(grid.n), fill) {}
  Field(const Grid& grid, std::vector<double> values)
      : grid_(grid), v_(std::move(values)) {
    if (static_cast<int>(v_.size()) != grid_.n)
      throw std::invalid_argument("Field: value count does not match grid");
  }

  const Grid& grid() const { return grid_; }
  int n() const { return grid_.n; }
  double& operator[](int i) { return v_[static_cast<size_t>(i)]; }
  double operator[](int i) const { return v_[static_cast<size_t>(i)]; }
  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }

  bool finite() const {
    for (double x : v_)
      if (!std::isfinite(x)) return false;
    return true;
  }
  void require_finite(const std::string& where) const {
    if (!finite()) throw NanError(where);
  }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double a);

 private:
  Grid grid_;
  std::vector<double> v_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double a, Field f);
// Pointwise product on grid values.
Field pointwise(const Field& a, const Field& b);

// Combine c0*a + c1*b without temporaries; grids must match.
Field axpby(double c0, const Field& a, double c1, const Field& b);

double sup_abs(const Field& f);
double min_value(const Field& f);
double max_value(const Field& f);

// Green kernel of (1 - d/dx^2): Q(x) = e^{-|x|}/2 on the line, and its
// periodization on a box of length L.
struct GreenKernel {
  static double line(double x) { return 0.5 * std::exp(-std::abs(x)); }
  static double line_deriv(double x) {
    double s = x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
    return -0.5 * s * std::exp(-std::abs(x));
  }
  // cosh(L/2 - |x|) / (2 sinh(L/2)) for x reduced to [-L/2, L/2]
  static double periodic(double x, double L);
};

}  // namespace theta
