#include "sbpwave/operators.hpp"

namespace sbpwave {

std::string to_string(StencilKind kind) { return kind == StencilKind::wide ? "wide" : "narrow"; }

StencilKind stencil_kind_from_string(const std::string& s) {
  if (s == "wide") return StencilKind::wide;
  if (s == "narrow") return StencilKind::narrow;
  throw ConfigurationError("unknown stencil kind '" + s + "' (expected wide or narrow)");
}

Vector SbpOperator1::eL() const {
  Vector e = Vector::Zero(size());
  e(0) = 1.0;
  return e;
}

Vector SbpOperator1::eR() const {
  Vector e = Vector::Zero(size());
  e(size() - 1) = 1.0;
  return e;
}

Matrix SbpOperator1::boundary_matrix() const {
  Matrix b = Matrix::Zero(size(), size());
  if (!periodic()) {
    b(0, 0) = -1.0;
    b(size() - 1, size() - 1) = 1.0;
  }
  return b;
}

SbpOperator1 UpwindPair::central() const {
  SbpOperator1 op;
  op.grid = grid;
  op.M = M;
  op.D1 = 0.5 * (Dplus + Dminus);
  op.accuracy_order = accuracy_order;
  op.name = name + " central";
  return op;
}

Matrix SbpOperator2::A2() const {
  Matrix a = -M.left_multiply(D2);
  if (!periodic()) {
    const Index n = size();
    a.row(n - 1) += dR.transpose();
    a.row(0) -= dL.transpose();
  }
  return a;
}

}  // namespace sbpwave
