#include "thetawave/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace theta {

namespace {

// One FFTW plan pair per transform size. Plans are created with
// FFTW_ESTIMATE (reproducible plan choice) and FFTW_UNALIGNED so the
// new-array execute interface works on any caller buffer; execution on
// distinct arrays is thread safe.
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

PlanPair& plans_for(int n) {
  static std::map<int, PlanPair> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<double> real(static_cast<size_t>(n));
  std::vector<fftw_complex> cplx(static_cast<size_t>(n / 2 + 1));
  PlanPair p;
  p.fwd = fftw_plan_dft_r2c_1d(n, real.data(), cplx.data(),
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.inv = fftw_plan_dft_c2r_1d(n, cplx.data(), real.data(),
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  return cache.emplace(n, p).first->second;
}

using SymbolFn = std::complex<double> (*)(double k, int mode, int nyquist);

Field apply_symbol(const Field& f, SymbolFn symbol, const char* where) {
  f.require_finite(where);
  Spectrum s = fft(f);
  const int ny = f.n() / 2;
  for (int k = 0; k <= ny; ++k) {
    s.c[static_cast<size_t>(k)] *= symbol(s.wavenumber(k), k, ny);
  }
  return ifft(s);
}

}  // namespace

Spectrum fft(const Field& f) {
  const int n = f.n();
  PlanPair& p = plans_for(n);
  std::vector<double> in(f.values());
  Spectrum s;
  s.grid = f.grid();
  s.c.resize(static_cast<size_t>(n / 2 + 1));
  fftw_execute_dft_r2c(p.fwd, in.data(),
                       reinterpret_cast<fftw_complex*>(s.c.data()));
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& z : s.c) z *= scale;
  return s;
}

Field ifft(const Spectrum& s) {
  const int n = s.grid.n;
  PlanPair& p = plans_for(n);
  std::vector<std::complex<double>> in(s.c);
  Field out(s.grid);
  fftw_execute_dft_c2r(p.inv, reinterpret_cast<fftw_complex*>(in.data()),
                       out.values().data());
  return out;
}

Field deriv(const Field& f) {
  return apply_symbol(
      f,
      [](double k, int mode, int nyquist) {
        if (mode == nyquist) return std::complex<double>(0.0, 0.0);
        return std::complex<double>(0.0, k);
      },
      "deriv");
}

Field deriv2(const Field& f) {
  return apply_symbol(
      f,
      [](double k, int, int) { return std::complex<double>(-k * k, 0.0); },
      "deriv2");
}

Field helmholtz_apply(const Field& u) {
  return apply_symbol(
      u,
      [](double k, int, int) { return std::complex<double>(1.0 + k * k, 0.0); },
      "helmholtz_apply");
}

Field helmholtz_solve(const Field& m) {
  return apply_symbol(
      m,
      [](double k, int, int) {
        return std::complex<double>(1.0 / (1.0 + k * k), 0.0);
      },
      "helmholtz_solve");
}

Field green_convolve(const Field& f) {
  f.require_finite("green_convolve");
  return helmholtz_solve(f);
}

double integrate(const Field& f) {
  f.require_finite("integrate");
  double s = 0.0;
  for (double x : f.values()) s += x;
  return s * f.grid().dx;
}

Field dealias(const Field& f) {
  Spectrum s = fft(f);
  const int cut = f.n() / 3;
  for (int k = cut + 1; k <= f.n() / 2; ++k) s.c[static_cast<size_t>(k)] = 0.0;
  return ifft(s);
}

Field shift(const Field& f, double a) {
  Spectrum s = fft(f);
  const int ny = f.n() / 2;
  for (int k = 0; k <= ny; ++k) {
    double ka = s.wavenumber(k) * a;
    s.c[static_cast<size_t>(k)] *=
        std::complex<double>(std::cos(ka), std::sin(ka));
  }
  // keep the shifted Nyquist mode real so ifft returns a real signal
  s.c[static_cast<size_t>(ny)] =
      std::complex<double>(s.c[static_cast<size_t>(ny)].real(), 0.0);
  return ifft(s);
}

double norm_l1(const Field& f) {
  double s = 0.0;
  for (double x : f.values()) s += std::abs(x);
  return s * f.grid().dx;
}

double norm_l2_sq(const Field& f) {
  double s = 0.0;
  for (double x : f.values()) s += x * x;
  return s * f.grid().dx;
}

double norm_h1_sq(const Field& f) {
  Field fx = deriv(f);
  double s = 0.0;
  for (int i = 0; i < f.n(); ++i) s += f[i] * f[i] + fx[i] * fx[i];
  return s * f.grid().dx;
}

double FourierInterpolant::operator()(double x) const {
  const Grid& g = s_.grid;
  const double rel = (x - g.origin) * (2.0 * M_PI / g.length);
  const int ny = g.n / 2;
  // mode 0
  double acc = s_.c[0].real();
  for (int k = 1; k < ny; ++k) {
    double ph = static_cast<double>(k) * rel;
    const std::complex<double>& c = s_.c[static_cast<size_t>(k)];
    acc += 2.0 * (c.real() * std::cos(ph) - c.imag() * std::sin(ph));
  }
  // Nyquist mode: represented as a pure cosine
  acc += s_.c[static_cast<size_t>(ny)].real() *
         std::cos(static_cast<double>(ny) * rel);
  return acc;
}

}  // namespace theta
