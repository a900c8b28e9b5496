#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sbpwave {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Invalid user input or a discretization that violates a theorem hypothesis.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operator or factorization could not be built from otherwise valid input.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A time step could not be completed (e.g. no relaxation root was bracketed).
class StepFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Domain {
  double x_min = 0.0;
  double x_max = 1.0;

  double length() const { return x_max - x_min; }
};

struct Grid {
  Vector nodes;
  double x_min = 0.0;
  double x_max = 1.0;
  bool periodic = false;

  Index size() const { return nodes.size(); }
  double length() const { return x_max - x_min; }
  Domain domain() const { return {x_min, x_max}; }
};

/// Symmetric positive definite quadrature matrix, stored diagonally when possible.
class MassMatrix {
 public:
  MassMatrix() = default;

  static MassMatrix diagonal(Vector weights);
  static MassMatrix dense(Matrix m);

  bool is_diagonal() const { return is_diagonal_; }
  Index size() const { return is_diagonal_ ? diag_.size() : dense_.rows(); }

  /// Diagonal entries; throws for a dense mass matrix.
  const Vector& diag() const;
  Matrix to_dense() const;

  Vector apply(const Vector& v) const;
  Vector solve(const Vector& v) const;
  /// M * A.
  Matrix left_multiply(const Matrix& a) const;
  /// M^{-1} * A.
  Matrix left_solve(const Matrix& a) const;

  double inner(const Vector& u, const Vector& v) const;
  double norm_squared(const Vector& u) const { return inner(u, u); }
  double norm(const Vector& u) const;
  /// 1^T M u.
  double integrate(const Vector& u) const;
  /// 1^T M 1.
  double total() const;

 private:
  bool is_diagonal_ = true;
  Vector diag_;
  Matrix dense_;
};

/// Elementwise (nodal) product.
inline Vector nodal(const Vector& a, const Vector& b) { return a.cwiseProduct(b); }

/// Largest absolute entry; 0 for empty input.
double max_abs(const Matrix& a);

}  // namespace sbpwave
