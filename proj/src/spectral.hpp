#pragma once

#include "sbpwave/core.hpp"

#include <complex>
#include <vector>

namespace sbpwave::spectral {

using Spectrum = std::vector<std::complex<double>>;

/// Unnormalized forward DFT of real samples.
Spectrum forward(const Vector& v);
/// Real part of the normalized inverse DFT.
Vector inverse(const Spectrum& s);
/// Angular wavenumbers 2 pi k / L in FFT order; the Nyquist entry is +pi n / L.
Vector wavenumbers(Index n, double length);
/// Spectral derivative of order m; odd orders drop the Nyquist mode.
Vector derivative(const Vector& v, double length, int m);

}  // namespace sbpwave::spectral
