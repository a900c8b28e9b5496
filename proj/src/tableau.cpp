#include "sbpwave/timeint.hpp"

#include <cmath>

namespace sbpwave {

bool ButcherTableau::is_explicit() const {
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = i; j < A.cols(); ++j)
      if (A(i, j) != 0.0) return false;
  return true;
}

void ButcherTableau::validate() const {
  const Index s = stages();
  if (s == 0 || A.rows() != s || A.cols() != s || c.size() != s)
    throw ConfigurationError(name + ": inconsistent tableau dimensions");
  if (b_hat && b_hat->size() != s) throw ConfigurationError(name + ": embedded weights have wrong length");
  if (!is_explicit()) throw ConfigurationError(name + ": only explicit tableaus are supported");
  if (std::abs(b.sum() - 1.0) > 1e-14) throw ConfigurationError(name + ": weights do not sum to one");
  if ((A.rowwise().sum() - c).cwiseAbs().maxCoeff() > 1e-14)
    throw ConfigurationError(name + ": c differs from the row sums of A");
}

namespace {

ButcherTableau make(std::string name, int order, Index s) {
  ButcherTableau t;
  t.name = std::move(name);
  t.order = order;
  t.A = Matrix::Zero(s, s);
  t.b = Vector::Zero(s);
  t.c = Vector::Zero(s);
  return t;
}

}  // namespace

ButcherTableau rk4() {
  auto t = make("rk4", 4, 4);
  t.A(1, 0) = 0.5;
  t.A(2, 1) = 0.5;
  t.A(3, 2) = 1.0;
  t.b << 1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6;
  t.c << 0.0, 0.5, 0.5, 1.0;
  return t;
}

ButcherTableau dp5() {
  auto t = make("dp5", 5, 7);
  t.c << 0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0;
  t.A(1, 0) = 1.0 / 5;
  t.A(2, 0) = 3.0 / 40;
  t.A(2, 1) = 9.0 / 40;
  t.A(3, 0) = 44.0 / 45;
  t.A(3, 1) = -56.0 / 15;
  t.A(3, 2) = 32.0 / 9;
  t.A(4, 0) = 19372.0 / 6561;
  t.A(4, 1) = -25360.0 / 2187;
  t.A(4, 2) = 64448.0 / 6561;
  t.A(4, 3) = -212.0 / 729;
  t.A(5, 0) = 9017.0 / 3168;
  t.A(5, 1) = -355.0 / 33;
  t.A(5, 2) = 46732.0 / 5247;
  t.A(5, 3) = 49.0 / 176;
  t.A(5, 4) = -5103.0 / 18656;
  t.b << 35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0;
  t.A.row(6) = t.b.transpose();
  Vector bh(7);
  bh << 5179.0 / 57600, 0.0, 7571.0 / 16695, 393.0 / 640, -92097.0 / 339200, 187.0 / 2100, 1.0 / 40;
  t.b_hat = bh;
  t.embedded_order = 4;
  return t;
}

ButcherTableau butcher6() {
  auto t = make("butcher6", 6, 7);
  t.c << 0.0, 1.0 / 3, 2.0 / 3, 1.0 / 3, 0.5, 0.5, 1.0;
  t.A(1, 0) = 1.0 / 3;
  t.A(2, 1) = 2.0 / 3;
  t.A(3, 0) = 1.0 / 12;
  t.A(3, 1) = 1.0 / 3;
  t.A(3, 2) = -1.0 / 12;
  t.A(4, 0) = -1.0 / 16;
  t.A(4, 1) = 9.0 / 8;
  t.A(4, 2) = -3.0 / 16;
  t.A(4, 3) = -3.0 / 8;
  t.A(5, 1) = 9.0 / 8;
  t.A(5, 2) = -3.0 / 8;
  t.A(5, 3) = -3.0 / 4;
  t.A(5, 4) = 1.0 / 2;
  t.A(6, 0) = 9.0 / 44;
  t.A(6, 1) = -9.0 / 11;
  t.A(6, 2) = 63.0 / 44;
  t.A(6, 3) = 18.0 / 11;
  t.A(6, 5) = -16.0 / 11;
  t.b << 11.0 / 120, 0.0, 27.0 / 40, 27.0 / 40, -4.0 / 15, -4.0 / 15, 11.0 / 120;
  return t;
}

ButcherTableau tableau_from_string(const std::string& name) {
  if (name == "rk4") return rk4();
  if (name == "dp5") return dp5();
  if (name == "butcher6") return butcher6();
  throw ConfigurationError("unknown time integrator '" + name + "' (expected rk4, dp5 or butcher6)");
}

RhsFunction as_rhs(const SemidiscretizationPtr& sd) {
  return [sd](double, const Vector& u, Vector& du) { sd->rhs(u, du); };
}

RkStep rk_step(const ButcherTableau& tableau, const RhsFunction& f, const Vector& u, double t,
               double dt) {
  if (!tableau.is_explicit()) throw ConfigurationError(tableau.name + ": tableau is not explicit");
  const Index s = tableau.stages();
  std::vector<Vector> k(static_cast<size_t>(s));
  Vector stage(u.size());
  for (Index i = 0; i < s; ++i) {
    stage = u;
    for (Index j = 0; j < i; ++j)
      if (tableau.A(i, j) != 0.0) stage.noalias() += (dt * tableau.A(i, j)) * k[j];
    k[i].resize(u.size());
    f(t + tableau.c(i) * dt, stage, k[i]);
  }
  RkStep out;
  out.direction = Vector::Zero(u.size());
  for (Index i = 0; i < s; ++i)
    if (tableau.b(i) != 0.0) out.direction.noalias() += tableau.b(i) * k[i];
  out.state = u + dt * out.direction;
  if (tableau.b_hat) {
    out.error_estimate = Vector::Zero(u.size());
    for (Index i = 0; i < s; ++i) {
      const double w = tableau.b(i) - (*tableau.b_hat)(i);
      if (w != 0.0) out.error_estimate.noalias() += (dt * w) * k[i];
    }
  }
  return out;
}

}  // namespace sbpwave
