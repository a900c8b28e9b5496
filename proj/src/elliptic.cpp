#include "sbpwave/elliptic.hpp"

#include <sstream>

namespace sbpwave {

EllipticSolver::EllipticSolver(Matrix a, MassMatrix m, std::string name)
    : a_(std::move(a)), m_(std::move(m)), name_(std::move(name)) {
  if (a_.rows() != a_.cols() || a_.rows() != m_.size())
    throw ConfigurationError(name_ + ": dimension mismatch");
  const Matrix ma = m_.left_multiply(a_);
  const double scale = max_abs(ma);
  const bool symmetric = max_abs(ma - ma.transpose()) <= 1e-12 * scale;
  if (symmetric) {
    llt_.compute(0.5 * (ma + ma.transpose()));
    if (llt_.info() != Eigen::Success) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (ma + ma.transpose()), Eigen::EigenvaluesOnly);
      std::ostringstream os;
      os << name_ << ": assembled operator is not positive definite (smallest eigenvalue of M*A "
         << es.eigenvalues().minCoeff() << ")";
      throw ConstructionError(os.str());
    }
    spd_ = true;
    return;
  }
  lu_.compute(a_);
  const double rcond = lu_.rcond();
  if (!(rcond > 1e-14)) {
    std::ostringstream os;
    os << name_ << ": assembled operator is singular (reciprocal condition estimate " << rcond << ")";
    throw ConstructionError(os.str());
  }
}

void EllipticSolver::check_size(const Vector& w) const {
  if (w.size() != a_.rows())
    throw ConfigurationError(name_ + ": right-hand side has length " + std::to_string(w.size()) +
                             ", expected " + std::to_string(a_.rows()));
}

Vector EllipticSolver::apply_inverse(const Vector& w) const {
  check_size(w);
  if (spd_) return llt_.solve(m_.apply(w));
  return lu_.solve(w);
}

Vector EllipticSolver::apply_inverse_transpose(const Vector& w) const {
  check_size(w);
  // (M A)^T = M A, hence A^{-T} = M (M A)^{-1}.
  if (spd_) return m_.apply(llt_.solve(w));
  return lu_.transpose().solve(w);
}

EllipticSolver make_solver(const SbpOperator2& d2, double a, double b) {
  const Index n = d2.size();
  Matrix op = a * Matrix::Identity(n, n) + b * d2.D2;
  std::ostringstream name;
  name << "(" << a << " I + " << b << " D2)";
  return EllipticSolver(std::move(op), d2.M, name.str());
}

EllipticSolver make_solver(const SbpOperator2& d2, const SbpOperator4& d4, double a, double b,
                           double c) {
  const Index n = d2.size();
  if (d4.size() != n) throw ConfigurationError("make_solver: D2 and D4 sizes differ");
  Matrix op = a * Matrix::Identity(n, n) + b * d2.D2 + c * d4.D4;
  std::ostringstream name;
  name << "(" << a << " I + " << b << " D2 + " << c << " D4)";
  return EllipticSolver(std::move(op), d2.M, name.str());
}

ReflectingSolvers::ReflectingSolvers(const SbpOperator1& d1) {
  if (d1.periodic()) throw ConfigurationError("reflecting solvers require a bounded operator");
  const Matrix md = d1.M.left_multiply(d1.D1);
  if (max_abs(md + md.transpose() - d1.boundary_matrix()) > 1e-10 * max_abs(md))
    throw ConfigurationError("reflecting solvers: D1 does not satisfy the SBP identity");
  const Index n = d1.size();
  projection_ = Vector::Ones(n);
  projection_(0) = 0.0;
  projection_(n - 1) = 0.0;
  const Matrix mpd1 = d1.M.left_multiply(projection_.asDiagonal() * d1.D1);
  Matrix an = Matrix::Identity(n, n) + d1.M.left_solve(d1.D1.transpose() * mpd1);
  neumann_ = EllipticSolver(std::move(an), d1.M, "Neumann (I - D2_N)");
  const Matrix full = Matrix::Identity(n, n) - d1.D1 * d1.D1;
  dirichlet_lu_.compute(full.block(1, 1, n - 2, n - 2));
  if (!(dirichlet_lu_.rcond() > 1e-14))
    throw ConstructionError("Dirichlet (I - D2_D): interior system is singular");
}

Vector ReflectingSolvers::solve_dirichlet(const Vector& w) const {
  const Index n = size();
  if (w.size() != n) throw ConfigurationError("Dirichlet solve: dimension mismatch");
  Vector v = Vector::Zero(n);
  v.segment(1, n - 2) = dirichlet_lu_.solve(w.segment(1, n - 2));
  return v;
}

ReflectingSolvers make_reflecting_solvers(const SbpOperator1& d1) { return ReflectingSolvers(d1); }

}  // namespace sbpwave
