#include "sbpwave/operators.hpp"

namespace sbpwave {

SbpOperator2 square_d1(const SbpOperator1& op) {
  SbpOperator2 out;
  out.grid = op.grid;
  out.M = op.M;
  out.D2 = op.D1 * op.D1;
  if (!op.periodic()) {
    out.dL = op.D1.row(0).transpose();
    out.dR = op.D1.row(op.size() - 1).transpose();
  }
  out.kind = StencilKind::wide;
  out.accuracy_order = op.accuracy_order;
  out.spectral = op.spectral;
  out.name = "square_d1(" + op.name + ")";
  return out;
}

SbpOperator2 compose_upwind(const UpwindPair& pair, UpwindComposition order) {
  const bool minus_plus = order == UpwindComposition::minus_plus;
  // M D-D+ = -D+^T M D+ + B D+ and M D+D- = -D-^T M D- + B D-.
  const Matrix& inner = minus_plus ? pair.Dplus : pair.Dminus;
  SbpOperator2 out;
  out.grid = pair.grid;
  out.M = pair.M;
  out.D2 = minus_plus ? Matrix(pair.Dminus * pair.Dplus) : Matrix(pair.Dplus * pair.Dminus);
  if (!pair.periodic()) {
    out.dL = inner.row(0).transpose();
    out.dR = inner.row(pair.size() - 1).transpose();
  }
  out.kind = StencilKind::narrow;
  out.accuracy_order = pair.accuracy_order;
  out.name = std::string(minus_plus ? "D-D+" : "D+D-") + "(" + pair.name + ")";
  return out;
}

SbpOperator4 square_d2(const SbpOperator2& op) {
  if (!op.periodic()) throw ConfigurationError("square_d2: only periodic D4 = D2^2 is supported");
  SbpOperator4 out;
  out.grid = op.grid;
  out.M = op.M;
  out.D4 = op.D2 * op.D2;
  out.accuracy_order = op.accuracy_order;
  out.spectral = op.spectral;
  out.name = "square_d2(" + op.name + ")";
  return out;
}

}  // namespace sbpwave
