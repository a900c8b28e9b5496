#include "sbpwave/operators.hpp"

#include <string>

namespace sbpwave {
namespace {

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

Matrix circulant(Index n, int left, const std::vector<double>& coeffs, double scale) {
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      const Index j = ((i + static_cast<Index>(k) - left) % n + n) % n;
      d(i, j) += coeffs[k] * scale;
    }
  }
  return d;
}

void require_even_order(int order) {
  if (order < 2 || order > 8 || order % 2 != 0)
    throw ConfigurationError("periodic FD order must be one of 2, 4, 6, 8 (got " +
                             std::to_string(order) + ")");
}

void require_width(Index n, int width) {
  if (n < width)
    throw ConfigurationError("N = " + std::to_string(n) + " is too small for a stencil of width " +
                             std::to_string(width));
}

/// Antisymmetric (deriv odd) or symmetric (deriv even) cleanup of a centred stencil.
void symmetrize(std::vector<double>& c, int deriv) {
  const int m = static_cast<int>(c.size()) / 2;
  const double sign = deriv % 2 == 0 ? 1.0 : -1.0;
  for (int j = 1; j <= m; ++j) {
    const double avg = 0.5 * (c[m + j] + sign * c[m - j]);
    c[m + j] = avg;
    c[m - j] = sign * avg;
  }
  if (deriv % 2 == 1) c[m] = 0.0;
}

}  // namespace

Grid periodic_grid(Index n, Domain domain) {
  if (!(domain.length() > 0.0)) throw ConfigurationError("domain length must be positive");
  Grid g;
  g.periodic = true;
  g.x_min = domain.x_min;
  g.x_max = domain.x_max;
  g.nodes.resize(n);
  const double dx = domain.length() / static_cast<double>(n);
  for (Index i = 0; i < n; ++i) g.nodes(i) = domain.x_min + static_cast<double>(i) * dx;
  return g;
}

std::vector<double> fd_stencil(int left, int right, int deriv) {
  const int n = left + right + 1;
  if (left < 0 || right < 0 || deriv < 0 || deriv >= n)
    throw ConfigurationError("fd_stencil: invalid stencil shape");
  LongMatrix v(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      long double p = 1.0L;
      for (int e = 0; e < k; ++e) p *= static_cast<long double>(j - left);
      v(k, j) = p;
    }
  LongVector rhs = LongVector::Zero(n);
  long double factorial = 1.0L;
  for (int e = 2; e <= deriv; ++e) factorial *= e;
  rhs(deriv) = factorial;
  const LongVector c = v.fullPivLu().solve(rhs);
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = static_cast<double>(c(j));
  return out;
}

SbpOperator1 fd_periodic_d1(Index n, Domain domain, int order) {
  require_even_order(order);
  require_width(n, order + 1);
  const int m = order / 2;
  auto c = fd_stencil(m, m, 1);
  symmetrize(c, 1);
  SbpOperator1 op;
  op.grid = periodic_grid(n, domain);
  const double dx = domain.length() / static_cast<double>(n);
  op.M = MassMatrix::diagonal(Vector::Constant(n, dx));
  op.D1 = circulant(n, m, c, 1.0 / dx);
  op.accuracy_order = order;
  op.name = "fd_periodic_d1(order=" + std::to_string(order) + ")";
  return op;
}

SbpOperator2 fd_periodic_d2(Index n, Domain domain, int order, StencilKind kind) {
  require_even_order(order);
  if (kind == StencilKind::wide) {
    SbpOperator2 op = square_d1(fd_periodic_d1(n, domain, order));
    op.name = "fd_periodic_d2(order=" + std::to_string(order) + ", wide)";
    return op;
  }
  require_width(n, order + 1);
  const int m = order / 2;
  auto c = fd_stencil(m, m, 2);
  symmetrize(c, 2);
  SbpOperator2 op;
  op.grid = periodic_grid(n, domain);
  const double dx = domain.length() / static_cast<double>(n);
  op.M = MassMatrix::diagonal(Vector::Constant(n, dx));
  op.D2 = circulant(n, m, c, 1.0 / (dx * dx));
  op.kind = StencilKind::narrow;
  op.accuracy_order = order;
  op.name = "fd_periodic_d2(order=" + std::to_string(order) + ", narrow)";
  return op;
}

UpwindPair fd_periodic_upwind(Index n, Domain domain, int order) {
  if (order < 1 || order > 8)
    throw ConfigurationError("periodic upwind FD order must be in 1..8 (got " +
                             std::to_string(order) + ")");
  const int left = (order - 1) / 2;
  const int right = order - left;
  require_width(n, 2 * right + 1);
  const auto c = fd_stencil(left, right, 1);
  UpwindPair pair;
  pair.grid = periodic_grid(n, domain);
  const double dx = domain.length() / static_cast<double>(n);
  pair.M = MassMatrix::diagonal(Vector::Constant(n, dx));
  pair.Dplus = circulant(n, left, c, 1.0 / dx);
  pair.Dminus = -pair.Dplus.transpose();
  pair.accuracy_order = order;
  pair.name = "fd_periodic_upwind(order=" + std::to_string(order) + ")";
  return pair;
}

}  // namespace sbpwave
