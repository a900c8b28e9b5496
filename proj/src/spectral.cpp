#include "spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <numbers>

namespace sbpwave::spectral {

Spectrum forward(const Vector& v) {
  Eigen::FFT<double> fft;
  Spectrum in(static_cast<size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) in[i] = v(i);
  Spectrum out;
  fft.fwd(out, in);
  return out;
}

Vector inverse(const Spectrum& s) {
  Eigen::FFT<double> fft;
  Spectrum out;
  fft.inv(out, s);
  Vector v(static_cast<Index>(out.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = out[i].real();
  return v;
}

Vector wavenumbers(Index n, double length) {
  Vector k(n);
  for (Index i = 0; i < n; ++i) {
    const Index m = (i <= n / 2) ? i : i - n;
    k(i) = 2.0 * std::numbers::pi * static_cast<double>(m) / length;
  }
  return k;
}

Vector derivative(const Vector& v, double length, int m) {
  const Index n = v.size();
  Spectrum s = forward(v);
  const Vector k = wavenumbers(n, length);
  const std::complex<double> i1(0.0, 1.0);
  for (Index j = 0; j < n; ++j) {
    if (m % 2 == 1 && n % 2 == 0 && j == n / 2) {
      s[j] = 0.0;
      continue;
    }
    s[j] *= std::pow(i1 * k(j), m);
  }
  return inverse(s);
}

}  // namespace sbpwave::spectral
