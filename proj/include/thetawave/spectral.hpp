#pragma once

#include <complex>
#include <vector>

#include "thetawave/grid.hpp"

namespace theta {

// Half-complex spectrum of a real field: coefficients for modes 0..n/2,
// normalized so that u(x) = sum_k c_k exp(i k (x-origin)) + c.c. (k>0 terms
// counted once with conjugate symmetry).
struct Spectrum {
  Grid grid;
  std::vector<std::complex<double>> c;  // size n/2 + 1, c[k] = u_hat_k / n

  double wavenumber(int k) const {
    return 2.0 * M_PI * static_cast<double>(k) / grid.length;
  }
};

Spectrum fft(const Field& f);
Field ifft(const Spectrum& s);

// Spectral first derivative; the Nyquist mode of an odd derivative is zeroed.
Field deriv(const Field& f);
// Spectral second derivative (symbol -k^2, Nyquist kept).
Field deriv2(const Field& f);

// m = (1 - d^2/dx^2) u, symbol 1 + k^2.
Field helmholtz_apply(const Field& u);
// u = (1 - d^2/dx^2)^{-1} m, symbol 1/(1 + k^2).
Field helmholtz_solve(const Field& m);
// Q * f with the periodized Green kernel; identical operator to
// helmholtz_solve, kept as a separate entry point for the kernel view.
Field green_convolve(const Field& f);

// Rectangle rule dx * sum(values); spectrally accurate for smooth periodic f.
double integrate(const Field& f);

// 2/3-rule dealiasing: zero modes with index > n/3.
Field dealias(const Field& f);

// u(x) -> u(x + a); exact phase shift of the band-limited interpolant.
Field shift(const Field& f, double a);

double norm_l1(const Field& f);
double norm_l2_sq(const Field& f);
double norm_h1_sq(const Field& f);  // int (u^2 + u_x^2)

// Band-limited (trigonometric) interpolant for off-grid evaluation.
class FourierInterpolant {
 public:
  FourierInterpolant() = default;
  explicit FourierInterpolant(const Field& f) : s_(fft(f)) {}
  explicit FourierInterpolant(Spectrum s) : s_(std::move(s)) {}
  double operator()(double x) const;
  const Spectrum& spectrum() const { return s_; }

 private:
  Spectrum s_;
};

}  // namespace theta
