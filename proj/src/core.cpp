#include "sbpwave/core.hpp"

#include <cmath>

namespace sbpwave {

MassMatrix MassMatrix::diagonal(Vector weights) {
  if (weights.size() == 0) throw ConstructionError("mass matrix: empty");
  if ((weights.array() <= 0.0).any())
    throw ConstructionError("mass matrix: diagonal entries must be positive");
  MassMatrix m;
  m.is_diagonal_ = true;
  m.diag_ = std::move(weights);
  return m;
}

MassMatrix MassMatrix::dense(Matrix a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw ConstructionError("mass matrix: must be square and non-empty");
  if (max_abs(a - a.transpose()) > 1e-13 * max_abs(a))
    throw ConstructionError("mass matrix: not symmetric");
  if (Eigen::LLT<Matrix>(a).info() != Eigen::Success)
    throw ConstructionError("mass matrix: not positive definite");
  MassMatrix m;
  m.is_diagonal_ = false;
  m.dense_ = std::move(a);
  return m;
}

const Vector& MassMatrix::diag() const {
  if (!is_diagonal_) throw ConfigurationError("mass matrix is not diagonal");
  return diag_;
}

Matrix MassMatrix::to_dense() const {
  if (is_diagonal_) return diag_.asDiagonal();
  return dense_;
}

Vector MassMatrix::apply(const Vector& v) const {
  if (is_diagonal_) return diag_.cwiseProduct(v);
  return dense_ * v;
}

Vector MassMatrix::solve(const Vector& v) const {
  if (is_diagonal_) return v.cwiseQuotient(diag_);
  return dense_.llt().solve(v);
}

Matrix MassMatrix::left_multiply(const Matrix& a) const {
  if (is_diagonal_) return diag_.asDiagonal() * a;
  return dense_ * a;
}

Matrix MassMatrix::left_solve(const Matrix& a) const {
  if (is_diagonal_) return diag_.cwiseInverse().asDiagonal() * a;
  return dense_.llt().solve(a);
}

double MassMatrix::inner(const Vector& u, const Vector& v) const {
  if (is_diagonal_) return (u.array() * diag_.array() * v.array()).sum();
  return u.dot(dense_ * v);
}

double MassMatrix::norm(const Vector& u) const { return std::sqrt(norm_squared(u)); }

double MassMatrix::integrate(const Vector& u) const {
  if (is_diagonal_) return diag_.dot(u);
  return (dense_ * u).sum();
}

double MassMatrix::total() const {
  if (is_diagonal_) return diag_.sum();
  return dense_.sum();
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace sbpwave
