#include "sbpwave/equations.hpp"

#include <algorithm>

namespace sbpwave {

const Invariant& InvariantSet::get(const std::string& name) const {
  for (const auto& inv : items)
    if (inv.name == name) return inv;
  throw ConfigurationError("unknown invariant '" + name + "'");
}

bool InvariantSet::contains(const std::string& name) const {
  return std::any_of(items.begin(), items.end(), [&](const Invariant& i) { return i.name == name; });
}

std::vector<std::string> InvariantSet::names() const {
  std::vector<std::string> out;
  for (const auto& inv : items) out.push_back(inv.name);
  return out;
}

std::vector<double> InvariantSet::values(const Vector& state) const {
  std::vector<double> out;
  for (const auto& inv : items) out.push_back(inv.value(state));
  return out;
}

Vector Semidiscretization::rhs(const Vector& state) const {
  Vector d(state.size());
  rhs(state, d);
  return d;
}

double Semidiscretization::norm(const Vector& state) const {
  const Index n = grid_size();
  double s = 0.0;
  for (Index c = 0; c * n < state.size(); ++c) s += mass().norm_squared(state.segment(c * n, n));
  return std::sqrt(s);
}

Vector stack(const Vector& eta, const Vector& u) {
  Vector s(eta.size() + u.size());
  s << eta, u;
  return s;
}

namespace {

void require_diagonal(const OperatorBundle& b, const char* eq) {
  if (!b.diagonal_mass())
    throw ConfigurationError(std::string(eq) +
                             ": nodal split forms are conservative only with a diagonal mass matrix");
}

void require_periodic(const OperatorBundle& b, const char* eq) {
  if (!b.D1.periodic()) throw ConfigurationError(std::string(eq) + ": periodic operators required");
}

void check_state(const Vector& s, Index n, const char* eq) {
  if (s.size() != n)
    throw ConfigurationError(std::string(eq) + ": state has length " + std::to_string(s.size()) +
                             ", expected " + std::to_string(n));
}

/// M^T 1, the gradient of 1^T M u.
Vector mass_ones(const MassMatrix& m) {
  if (m.is_diagonal()) return m.diag();
  return m.to_dense().transpose() * Vector::Ones(m.size());
}

/// Linear invariant 1^T M L u with L given as a matrix (identity when empty).
Invariant linear_invariant(std::string name, std::string description, bool conserved,
                           const MassMatrix& m, const Matrix& l) {
  Vector grad = mass_ones(m);
  if (l.size() > 0) grad = l.transpose() * grad;
  Invariant inv;
  inv.name = std::move(name);
  inv.description = std::move(description);
  inv.kind = InvariantKind::linear;
  inv.conserved = conserved;
  inv.value = [grad](const Vector& u) { return grad.dot(u); };
  inv.gradient = [grad](const Vector&) { return grad; };
  return inv;
}

/// Quadratic invariant (1/2) u^T S u with S = M L (not necessarily symmetric).
Invariant quadratic_invariant(std::string name, std::string description, bool conserved, Matrix s,
                              double factor = 0.5) {
  Invariant inv;
  inv.name = std::move(name);
  inv.description = std::move(description);
  inv.kind = InvariantKind::quadratic;
  inv.conserved = conserved;
  auto sp = std::make_shared<const Matrix>(std::move(s));
  inv.value = [sp, factor](const Vector& u) { return factor * u.dot(*sp * u); };
  inv.gradient = [sp, factor](const Vector& u) -> Vector {
    return factor * (*sp * u + sp->transpose() * u);
  };
  return inv;
}

class ScalarBase : public Semidiscretization {
 public:
  explicit ScalarBase(const OperatorBundle& b) : b_(b) {}
  const SbpOperator1& d1() const override { return b_.D1; }
  const InvariantSet& invariants() const override { return inv_; }

 protected:
  OperatorBundle b_;
  InvariantSet inv_;
};

// BBM: u_t + (I - D2)^{-1} (1/3 D1 u^2 + 1/3 u D1 u + D1 u) = 0.
class Bbm : public ScalarBase {
 public:
  explicit Bbm(const OperatorBundle& b) : ScalarBase(b), e_(make_solver(b.D2a, 1.0, -1.0)) {
    require_diagonal(b_, "BBM");
    require_periodic(b_, "BBM");
    const auto& m = b_.M();
    const Index n = b_.size();
    const Matrix ell = Matrix::Identity(n, n) - b_.D2a.D2;
    inv_.items.push_back(linear_invariant("J1", "1^T M u", true, m, {}));
    inv_.items.push_back(quadratic_invariant("J2", "1/2 u^T M (I - D2) u", true, m.left_multiply(ell)));
    inv_.items.push_back(cubic_diagnostic(m));
  }

  Equation equation() const override { return Equation::bbm; }

  void rhs(const Vector& u, Vector& du) const override {
    check_state(u, b_.size(), "BBM");
    const Matrix& d1 = b_.D1.D1;
    const Vector d1u = d1 * u;
    const Vector f = (d1 * u.cwiseProduct(u) + u.cwiseProduct(d1u)) / 3.0 + d1u;
    du = -e_.apply_inverse(f);
  }

  void add_source(const Vector& g, Vector& du) const override { du += e_.apply_inverse(g); }

 protected:
  static Invariant cubic_diagnostic(const MassMatrix& m) {
    const Vector w = mass_ones(m);
    Invariant inv;
    inv.name = "J3";
    inv.description = "1^T M (u + 1)^3";
    inv.kind = InvariantKind::cubic;
    inv.conserved = false;
    inv.value = [w](const Vector& u) { return w.dot((u.array() + 1.0).cube().matrix()); };
    inv.gradient = [w](const Vector& u) -> Vector {
      return (3.0 * (u.array() + 1.0).square() * w.array()).matrix();
    };
    return inv;
  }

  EllipticSolver e_;
};

// BBM with the upwind linear term (I - D-D+)^{-1} D- u; D2 = D-D+ throughout.
class BbmDissipative : public Bbm {
 public:
  explicit BbmDissipative(const OperatorBundle& b) : Bbm(with_upwind_d2(b)) {
    inv_.items[1].conserved = false;
  }

  Equation equation() const override { return Equation::bbm_dissipative; }

  void rhs(const Vector& u, Vector& du) const override {
    check_state(u, b_.size(), "BBM (upwind)");
    const Matrix& d1 = b_.D1.D1;
    const Vector f = (d1 * u.cwiseProduct(u) + u.cwiseProduct(d1 * u)) / 3.0 + b_.upwind->Dminus * u;
    du = -e_.apply_inverse(f);
  }

 private:
  static OperatorBundle with_upwind_d2(const OperatorBundle& b) {
    if (!b.upwind) throw ConfigurationError("dissipative BBM requires an upwind operator pair");
    OperatorBundle out = b;
    out.D2a = compose_upwind(*b.upwind, UpwindComposition::minus_plus);
    out.D2b = out.D2a;
    return out;
  }
};

// Fornberg-Whitham: u_t + 1/3 D1 u^2 + 1/3 u D1 u + (I - D2)^{-1} D1 u = 0.
class Fw : public ScalarBase {
 public:
  explicit Fw(const OperatorBundle& b) : ScalarBase(b), e_(make_solver(b.D2a, 1.0, -1.0)) {
    require_diagonal(b_, "FW");
    require_periodic(b_, "FW");
    const auto& m = b_.M();
    const Index n = b_.size();
    const Matrix ell = Matrix::Identity(n, n) - b_.D2a.D2;
    inv_.items.push_back(linear_invariant("J1", "1^T M u", true, m, {}));
    inv_.items.push_back(linear_invariant("J2", "1^T M (I - D2) u", true, m, ell));
    inv_.items.push_back(quadratic_invariant("J3", "u^T M u", b_.d1_commutes_with_d2b(),
                                             m.to_dense(), 1.0));
  }

  Equation equation() const override { return Equation::fw; }

  void rhs(const Vector& u, Vector& du) const override {
    check_state(u, b_.size(), "FW");
    const Matrix& d1 = b_.D1.D1;
    const Vector d1u = d1 * u;
    du = -((d1 * u.cwiseProduct(u) + u.cwiseProduct(d1u)) / 3.0 + e_.apply_inverse(d1u));
  }

  void add_source(const Vector& g, Vector& du) const override { du += e_.apply_inverse(g); }

 private:
  EllipticSolver e_;
};

// Camassa-Holm split family with parameter alpha.
class Ch : public ScalarBase {
 public:
  Ch(const OperatorBundle& b, double alpha)
      : ScalarBase(b), alpha_(alpha), e_(make_solver(b.D2a, 1.0, -1.0)) {
    require_diagonal(b_, "CH");
    require_periodic(b_, "CH");
    const auto& m = b_.M();
    const Index n = b_.size();
    const Matrix ell = Matrix::Identity(n, n) - b_.D2a.D2;
    const bool linear_ok = alpha == 0.5 || b_.d1_commutes_with_d2b();
    inv_.items.push_back(linear_invariant("J1", "1^T M u", linear_ok, m, {}));
    inv_.items.push_back(quadratic_invariant("J2", "1/2 u^T M (I - D2a) u", true, m.left_multiply(ell)));
    const Vector w = mass_ones(m);
    const auto d1 = std::make_shared<const Matrix>(b_.D1.D1);
    Invariant j3;
    j3.name = "J3";
    j3.description = "1^T M (u^3 + u (D1 u)^2)";
    j3.kind = InvariantKind::cubic;
    j3.value = [w, d1](const Vector& u) {
      const Vector ux = *d1 * u;
      return w.dot((u.array().cube() + u.array() * ux.array().square()).matrix());
    };
    j3.gradient = [w, d1](const Vector& u) -> Vector {
      const Vector ux = *d1 * u;
      const Vector local = ((3.0 * u.array().square() + ux.array().square()) * w.array()).matrix();
      const Vector inner = (2.0 * u.array() * ux.array() * w.array()).matrix();
      return local + d1->transpose() * inner;
    };
    inv_.items.push_back(std::move(j3));
  }

  Equation equation() const override { return Equation::ch; }

  void rhs(const Vector& u, Vector& du) const override {
    check_state(u, b_.size(), "CH");
    const Matrix& d1 = b_.D1.D1;
    const Matrix& d2 = b_.D2b.D2;
    const Vector d1u = d1 * u;
    const Vector d2u = d2 * u;
    const Vector f = d1 * u.cwiseProduct(u) + u.cwiseProduct(d1u) -
                     alpha_ * (d1 * u.cwiseProduct(d2u)) -
                     (1.0 - alpha_) * (d2 * u.cwiseProduct(d1u)) -
                     (2.0 * alpha_ - 1.0) * d1u.cwiseProduct(d2u);
    du = -e_.apply_inverse(f);
  }

  void add_source(const Vector& g, Vector& du) const override { du += e_.apply_inverse(g); }

 private:
  double alpha_;
  EllipticSolver e_;
};

// Degasperis-Procesi: u_t + 1/3 (I - D2)^{-1} (4I - D2)(D1 u^2 + u D1 u) = 0.
class Dp : public ScalarBase {
 public:
  explicit Dp(const OperatorBundle& b)
      : ScalarBase(b), e_(make_solver(b.D2a, 1.0, -1.0)), f_(make_solver(b.D2a, 4.0, -1.0)) {
    require_diagonal(b_, "DP");
    require_periodic(b_, "DP");
    const auto& m = b_.M();
    const Index n = b_.size();
    const Matrix ell = Matrix::Identity(n, n) - b_.D2a.D2;
    inv_.items.push_back(linear_invariant("J1", "1^T M (I - D2) u", true, m, ell));
    const auto ms = std::make_shared<const Matrix>(m.left_multiply(ell));
    const auto fs = std::make_shared<const EllipticSolver>(f_);
    Invariant j2;
    j2.name = "J2";
    j2.description = "1/2 v^T M (I - D2) u, v = (4I - D2)^{-1} u";
    j2.kind = InvariantKind::quadratic;
    j2.conserved = true;
    j2.value = [ms, fs](const Vector& u) { return 0.5 * fs->apply_inverse(u).dot(*ms * u); };
    j2.gradient = [ms, fs](const Vector& u) -> Vector {
      return 0.5 * (fs->apply_inverse_transpose(*ms * u) + ms->transpose() * fs->apply_inverse(u));
    };
    inv_.items.push_back(std::move(j2));
    const Vector w = mass_ones(m);
    Invariant j3;
    j3.name = "J3";
    j3.description = "1^T M u^3";
    j3.kind = InvariantKind::cubic;
    j3.value = [w](const Vector& u) { return w.dot(u.array().cube().matrix()); };
    j3.gradient = [w](const Vector& u) -> Vector { return (3.0 * u.array().square() * w.array()).matrix(); };
    inv_.items.push_back(std::move(j3));
  }

  Equation equation() const override { return Equation::dp; }

  void rhs(const Vector& u, Vector& du) const override {
    check_state(u, b_.size(), "DP");
    const Matrix& d1 = b_.D1.D1;
    const Vector g = d1 * u.cwiseProduct(u) + u.cwiseProduct(d1 * u);
    du = -(e_.apply_inverse(4.0 * g - b_.D2a.D2 * g)) / 3.0;
  }

  void add_source(const Vector& g, Vector& du) const override { du += e_.apply_inverse(g); }

 private:
  EllipticSolver e_;
  EllipticSolver f_;
};

// Holm-Hone: u_t + (4I - 5D2a + D4a)^{-1} (D1 (u L u) + (D1 u) L u) = 0, L = 4I - 5D2b + D4b.
class Hh : public ScalarBase {
 public:
  explicit Hh(const OperatorBundle& b) : ScalarBase(b) {
    require_diagonal(b_, "HH");
    require_periodic(b_, "HH");
    if (!b_.D4a || !b_.D4b) throw ConfigurationError("HH: fourth-derivative operators required");
    e_ = make_solver(b_.D2a, *b_.D4a, 4.0, -5.0, 1.0);
    const Index n = b_.size();
    lb_ = 4.0 * Matrix::Identity(n, n) - 5.0 * b_.D2b.D2 + b_.D4b->D4;
    const auto& m = b_.M();
    const bool linear_ok = b_.d1_commutes_with_d2b() && b_.d1_commutes_with_d4b();
    inv_.items.push_back(linear_invariant("J1", "1^T M u", linear_ok, m, {}));
    inv_.items.push_back(linear_invariant("J2", "1^T M (4I - 5D2 + D4) u", linear_ok, m, e_.matrix()));
    inv_.items.push_back(quadratic_invariant("J3", "1/2 u^T M (4I - 5D2a + D4a) u", true,
                                             m.left_multiply(e_.matrix())));
  }

  Equation equation() const override { return Equation::hh; }

  void rhs(const Vector& u, Vector& du) const override {
    check_state(u, b_.size(), "HH");
    const Matrix& d1 = b_.D1.D1;
    const Vector lu = lb_ * u;
    const Vector f = d1 * u.cwiseProduct(lu) + (d1 * u).cwiseProduct(lu);
    du = -e_.apply_inverse(f);
  }

  void add_source(const Vector& g, Vector& du) const override { du += e_.apply_inverse(g); }

 private:
  EllipticSolver e_;
  Matrix lb_;
};

Invariant bbm_bbm_energy(const MassMatrix& m, bool conserved) {
  Invariant inv;
  inv.name = "J3";
  inv.description = "eta^T M eta + (u^2)^T M (1 + eta)";
  inv.kind = InvariantKind::cubic;
  inv.conserved = conserved;
  inv.value = [m](const Vector& s) {
    const Vector eta = eta_part(s);
    const Vector u = u_part(s);
    return m.inner(eta, eta) + m.inner(u.cwiseProduct(u), (eta.array() + 1.0).matrix());
  };
  inv.gradient = [m](const Vector& s) -> Vector {
    const Vector eta = eta_part(s);
    const Vector u = u_part(s);
    const Vector u2 = u.cwiseProduct(u);
    Vector ge = 2.0 * m.apply(eta);
    ge += m.is_diagonal() ? m.apply(u2) : Vector(m.to_dense().transpose() * u2);
    const Vector gu = 2.0 * u.cwiseProduct(m.apply((eta.array() + 1.0).matrix()));
    return stack(ge, gu);
  };
  return inv;
}

Invariant component_mass(std::string name, std::string description, const MassMatrix& m,
                         bool second, bool conserved) {
  const Vector w = mass_ones(m);
  const Index n = w.size();
  Invariant inv;
  inv.name = std::move(name);
  inv.description = std::move(description);
  inv.kind = InvariantKind::linear;
  inv.conserved = conserved;
  inv.value = [w, second, n](const Vector& s) { return w.dot(s.segment(second ? n : 0, n)); };
  inv.gradient = [w, second, n](const Vector&) -> Vector {
    Vector g = Vector::Zero(2 * n);
    g.segment(second ? n : 0, n) = w;
    return g;
  };
  return inv;
}

// Periodic BBM-BBM system.
class BbmBbm : public ScalarBase {
 public:
  explicit BbmBbm(const OperatorBundle& b) : ScalarBase(b), e_(make_solver(b.D2a, 1.0, -1.0)) {
    require_periodic(b_, "BBM-BBM");
    const auto& m = b_.M();
    inv_.items.push_back(component_mass("J1", "1^T M eta", m, false, true));
    inv_.items.push_back(component_mass("J2", "1^T M u", m, true, true));
    inv_.items.push_back(bbm_bbm_energy(m, b_.d1_commutes_with_d2b() && m.is_diagonal()));
  }

  Equation equation() const override { return Equation::bbm_bbm; }

  void rhs(const Vector& s, Vector& ds) const override {
    const Index n = b_.size();
    check_state(s, 2 * n, "BBM-BBM");
    const Vector eta = eta_part(s);
    const Vector u = u_part(s);
    const Matrix& d1 = b_.D1.D1;
    ds.resize(2 * n);
    ds.head(n) = -e_.apply_inverse(d1 * (u + eta.cwiseProduct(u)));
    ds.tail(n) = -e_.apply_inverse(d1 * (eta + 0.5 * u.cwiseProduct(u)));
  }

  void add_source(const Vector& g, Vector& ds) const override {
    const Index n = b_.size();
    ds.head(n) += e_.apply_inverse(g.head(n));
    ds.tail(n) += e_.apply_inverse(g.tail(n));
  }

 private:
  EllipticSolver e_;
};

// BBM-BBM between reflecting walls (Neumann for eta, Dirichlet for u).
class BbmBbmReflecting : public Semidiscretization {
 public:
  explicit BbmBbmReflecting(const SbpOperator1& d1) : d1_(d1), solvers_(d1) {
    const auto& m = d1_.M;
    inv_.items.push_back(component_mass("J1", "1^T M eta", m, false, true));
    inv_.items.push_back(component_mass("J2", "1^T M u", m, true, false));
    inv_.items.push_back(bbm_bbm_energy(m, m.is_diagonal()));
  }

  Equation equation() const override { return Equation::bbm_bbm_reflecting; }
  const SbpOperator1& d1() const override { return d1_; }
  const InvariantSet& invariants() const override { return inv_; }

  void rhs(const Vector& s, Vector& ds) const override {
    const Index n = d1_.size();
    check_state(s, 2 * n, "BBM-BBM (reflecting)");
    const Vector eta = eta_part(s);
    const Vector u = u_part(s);
    if (u(0) != 0.0 || u(n - 1) != 0.0)
      throw ConfigurationError("BBM-BBM (reflecting): u must vanish at both walls");
    ds.resize(2 * n);
    ds.head(n) = -solvers_.solve_neumann(d1_.D1 * (u + eta.cwiseProduct(u)));
    ds.tail(n) = -solvers_.solve_dirichlet(d1_.D1 * (eta + 0.5 * u.cwiseProduct(u)));
  }

  void add_source(const Vector& g, Vector& ds) const override {
    const Index n = d1_.size();
    ds.head(n) += solvers_.solve_neumann(g.head(n));
    ds.tail(n) += solvers_.solve_dirichlet(g.tail(n));
  }

 private:
  SbpOperator1 d1_;
  ReflectingSolvers solvers_;
  InvariantSet inv_;
};

}  // namespace

SemidiscretizationPtr make_bbm(const OperatorBundle& b) { return std::make_shared<Bbm>(b); }
SemidiscretizationPtr make_bbm_dissipative(const OperatorBundle& b) {
  return std::make_shared<BbmDissipative>(b);
}
SemidiscretizationPtr make_fw(const OperatorBundle& b) { return std::make_shared<Fw>(b); }
SemidiscretizationPtr make_ch(const OperatorBundle& b, double alpha) {
  return std::make_shared<Ch>(b, alpha);
}
SemidiscretizationPtr make_dp(const OperatorBundle& b) { return std::make_shared<Dp>(b); }
SemidiscretizationPtr make_hh(const OperatorBundle& b) { return std::make_shared<Hh>(b); }
SemidiscretizationPtr make_bbm_bbm(const OperatorBundle& b) { return std::make_shared<BbmBbm>(b); }
SemidiscretizationPtr make_bbm_bbm_reflecting(const SbpOperator1& d1) {
  return std::make_shared<BbmBbmReflecting>(d1);
}

SemidiscretizationPtr make_semidiscretization(Equation e, const OperatorBundle& b,
                                              const EquationParameters& params) {
  switch (e) {
    case Equation::bbm: return make_bbm(b);
    case Equation::fw: return make_fw(b);
    case Equation::ch: return make_ch(b, params.alpha);
    case Equation::dp: return make_dp(b);
    case Equation::hh: return make_hh(b);
    case Equation::bbm_bbm: return make_bbm_bbm(b);
    case Equation::bbm_bbm_reflecting: return make_bbm_bbm_reflecting(b.D1);
    case Equation::bbm_dissipative: return make_bbm_dissipative(b);
  }
  throw ConfigurationError("unsupported equation");
}

}  // namespace sbpwave
