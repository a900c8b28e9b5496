#include "sbpwave/solitary.hpp"

#include "sbpwave/operator_io.hpp"
#include "spectral.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>

namespace sbpwave {

namespace {

double wrap(double x, Domain d) {
  const double l = d.length();
  double y = std::fmod(x - d.x_min, l);
  if (y < 0.0) y += l;
  return d.x_min + y;
}

}  // namespace

Vector trigonometric_resample(const Vector& samples, Domain domain, const Vector& x) {
  const Index n = samples.size();
  if (n == 0) throw ConfigurationError("trigonometric_resample: no samples");
  const spectral::Spectrum c = spectral::forward(samples);
  const double l = domain.length();
  const Index half = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
  Vector out(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    const double theta = 2.0 * std::numbers::pi * (x(i) - domain.x_min) / l;
    const std::complex<double> step = std::polar(1.0, theta);
    std::complex<double> phase = step;
    double sum = c[0].real();
    for (Index k = 1; k < half; ++k) {
      sum += 2.0 * (c[k] * phase).real();
      // periodic re-anchoring keeps the recurrence at roundoff accuracy
      phase = (k % 64 == 63) ? std::polar(1.0, theta * static_cast<double>(k + 1)) : phase * step;
    }
    if (n % 2 == 0) sum += c[n / 2].real() * std::cos(theta * static_cast<double>(n / 2));
    out(i) = sum / static_cast<double>(n);
  }
  return out;
}

Vector TravelingWave::evaluate(const Vector& x, double t) const {
  Vector shifted(x.size());
  for (Index i = 0; i < x.size(); ++i) shifted(i) = wrap(x(i) - speed * t, domain);
  if (analytic) {
    return (amplitude / (width * shifted.array()).cosh().square() + offset).matrix();
  }
  const Index n = nodes.size();
  if (components() == 1) return trigonometric_resample(profile, domain, shifted);
  return stack(trigonometric_resample(profile.head(n), domain, shifted),
               trigonometric_resample(profile.tail(n), domain, shifted));
}

TravelingWave bbm_solitary(double c, Domain domain, Index n) {
  if (!(c > 1.0)) throw ConfigurationError("bbm_solitary: speed must exceed 1");
  if (n < 2) throw ConfigurationError("bbm_solitary: need at least two nodes");
  TravelingWave w;
  w.equation = Equation::bbm;
  w.speed = c;
  w.domain = domain;
  w.analytic = true;
  w.amplitude = 3.0 * (c - 1.0);
  w.width = 0.5 * std::sqrt(1.0 - 1.0 / c);
  w.nodes = periodic_grid(n, domain).nodes;
  w.profile = w.evaluate(w.nodes);
  return w;
}

TravelingWave kappa_transform(const TravelingWave& wave, double kappa) {
  if (kappa == 0.0) return wave;
  const Equation e = wave.equation;
  if (e != Equation::ch && e != Equation::dp && e != Equation::hh)
    throw ConfigurationError("kappa_transform: " + to_string(e) + " has no kappa family");
  TravelingWave out = wave;
  out.profile.array() += kappa;
  out.offset += kappa;
  out.speed += kappa;
  out.kappa -= kappa;
  return out;
}

void write_wave_csv(std::ostream& os, const TravelingWave& wave) {
  const Index n = wave.nodes.size();
  os << (wave.components() == 2 ? "x,eta,u\n" : "x,u\n");
  for (Index i = 0; i < n; ++i) {
    os << format_double(wave.nodes(i));
    if (wave.components() == 2)
      os << ',' << format_double(wave.profile(i)) << ',' << format_double(wave.profile(n + i));
    else
      os << ',' << format_double(wave.profile(i));
    os << '\n';
  }
}

}  // namespace sbpwave
