#pragma once

#include "sbpwave/operators.hpp"

#include <string>

namespace sbpwave {

/// Cached factorization of a*I + b*D2 + c*D4 (or any M-symmetric matrix).
/// M-symmetric systems are factored as the symmetric positive definite M*A with
/// Cholesky; others (bounded narrow operators) fall back to partial-pivot LU.
class EllipticSolver {
 public:
  EllipticSolver() = default;
  EllipticSolver(Matrix a, MassMatrix m, std::string name = "elliptic");

  Vector apply_inverse(const Vector& w) const;
  /// A^{-T} w.
  Vector apply_inverse_transpose(const Vector& w) const;
  Vector apply_forward(const Vector& v) const { return a_ * v; }

  const Matrix& matrix() const { return a_; }
  const MassMatrix& mass() const { return m_; }
  bool symmetric_positive_definite() const { return spd_; }
  Index size() const { return a_.rows(); }
  const std::string& name() const { return name_; }

 private:
  void check_size(const Vector& w) const;

  Matrix a_;
  MassMatrix m_;
  std::string name_;
  bool spd_ = false;
  Eigen::LLT<Matrix> llt_;
  Eigen::PartialPivLU<Matrix> lu_;
};

/// a*I + b*D2.
EllipticSolver make_solver(const SbpOperator2& d2, double a, double b);
/// a*I + b*D2 + c*D4.
EllipticSolver make_solver(const SbpOperator2& d2, const SbpOperator4& d4, double a, double b,
                           double c);

/// Elliptic solves for the reflecting (wall) BBM-BBM problem.
class ReflectingSolvers {
 public:
  explicit ReflectingSolvers(const SbpOperator1& d1);

  /// Solves P_D (I - D1^2) v = P_D w with v_0 = v_{N-1} = 0.
  Vector solve_dirichlet(const Vector& w) const;
  /// Solves (I + M^{-1} D1^T M P_D D1) v = w.
  Vector solve_neumann(const Vector& w) const { return neumann_.apply_inverse(w); }

  const Matrix& neumann_matrix() const { return neumann_.matrix(); }
  /// diag(0, 1, ..., 1, 0).
  const Vector& projection() const { return projection_; }
  Index size() const { return projection_.size(); }

 private:
  Vector projection_;
  EllipticSolver neumann_;
  Eigen::PartialPivLU<Matrix> dirichlet_lu_;
};

ReflectingSolvers make_reflecting_solvers(const SbpOperator1& d1);

}  // namespace sbpwave
