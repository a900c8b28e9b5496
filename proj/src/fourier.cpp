#include "sbpwave/operators.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace sbpwave {
namespace {

Matrix circulant_from_column(const Vector& c) {
  const Index n = c.size();
  Matrix d(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) d(i, j) = c(((i - j) % n + n) % n);
  return d;
}

}  // namespace

SbpOperator1 fourier_d1(Index n, Domain domain) {
  if (n < 2) throw ConfigurationError("fourier_d1 requires N >= 2");
  SbpOperator1 op;
  op.grid = periodic_grid(n, domain);
  const double length = domain.length();
  const double dx = length / static_cast<double>(n);
  const Index modes = (n - 1) / 2;  // Nyquist mode of even N is dropped
  Vector c = Vector::Zero(n);
  for (Index k = 1; k < n; ++k) {
    const double d = static_cast<double>(k) * dx;
    double s = 0.0;
    for (Index m = 1; m <= modes; ++m) {
      const double w = 2.0 * std::numbers::pi * static_cast<double>(m) / length;
      s -= w * std::sin(w * d);
    }
    c(k) = 2.0 * s / static_cast<double>(n);
  }
  for (Index k = 1; k <= n / 2; ++k) {
    const double odd = 0.5 * (c(k) - c(n - k));
    c(k) = odd;
    c(n - k) = -odd;
  }
  if (n % 2 == 0) c(n / 2) = 0.0;
  op.M = MassMatrix::diagonal(Vector::Constant(n, dx));
  op.D1 = circulant_from_column(c);
  op.accuracy_order = static_cast<int>(2 * modes);
  op.spectral = true;
  op.name = "fourier_d1(N=" + std::to_string(n) + ")";
  return op;
}

SbpOperator2 fourier_d2(Index n, Domain domain, StencilKind kind) {
  if (kind == StencilKind::wide) {
    SbpOperator2 op = square_d1(fourier_d1(n, domain));
    op.name = "fourier_d2(N=" + std::to_string(n) + ", wide)";
    return op;
  }
  if (n < 2) throw ConfigurationError("fourier_d2 requires N >= 2");
  SbpOperator2 op;
  op.grid = periodic_grid(n, domain);
  const double length = domain.length();
  const double dx = length / static_cast<double>(n);
  const Index modes = (n - 1) / 2;
  Vector c = Vector::Zero(n);
  for (Index k = 0; k < n; ++k) {
    const double d = static_cast<double>(k) * dx;
    double s = 0.0;
    for (Index m = 1; m <= modes; ++m) {
      const double w = 2.0 * std::numbers::pi * static_cast<double>(m) / length;
      s -= 2.0 * w * w * std::cos(w * d);
    }
    if (n % 2 == 0) {
      const double w = std::numbers::pi * static_cast<double>(n) / length;
      s -= w * w * ((k % 2 == 0) ? 1.0 : -1.0);
    }
    c(k) = s / static_cast<double>(n);
  }
  for (Index k = 1; k <= n / 2; ++k) {
    const double even = 0.5 * (c(k) + c(n - k));
    c(k) = even;
    c(n - k) = even;
  }
  op.M = MassMatrix::diagonal(Vector::Constant(n, dx));
  op.D2 = circulant_from_column(c);
  op.kind = StencilKind::narrow;
  op.accuracy_order = static_cast<int>(2 * modes);
  op.spectral = true;
  op.name = "fourier_d2(N=" + std::to_string(n) + ", narrow)";
  return op;
}

}  // namespace sbpwave
