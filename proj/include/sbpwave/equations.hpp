#pragma once

#include "sbpwave/elliptic.hpp"
#include "sbpwave/operators.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sbpwave {

enum class Equation { bbm, fw, ch, dp, hh, bbm_bbm, bbm_bbm_reflecting, bbm_dissipative };

std::string to_string(Equation e);
Equation equation_from_string(const std::string& s);
/// Number of grid functions in the state (2 for BBM-BBM).
int components(Equation e);

enum class Family { fourier, fd_periodic, fd_upwind, cg, dg };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

struct DiscretizationSpec {
  Family family = Family::fourier;
  /// FD order, element degree p; ignored for Fourier.
  int order = 2;
  StencilKind stencil = StencilKind::wide;
  /// Nodes (Fourier, FD) or elements (CG, DG).
  Index n = 64;
  Domain domain{0.0, 1.0};
  bool periodic = true;
};

std::string describe(const DiscretizationSpec& spec);

/// Operators shared by a semidiscretization; all share one mass matrix.
struct OperatorBundle {
  SbpOperator1 D1;
  std::optional<UpwindPair> upwind;
  SbpOperator2 D2a;
  SbpOperator2 D2b;
  std::optional<SbpOperator4> D4a;
  std::optional<SbpOperator4> D4b;
  std::string description;

  const Grid& grid() const { return D1.grid; }
  const MassMatrix& M() const { return D1.M; }
  Index size() const { return D1.size(); }
  bool diagonal_mass() const { return D1.M.is_diagonal(); }
  /// D1 D2b = D2b D1 to roundoff.
  bool d1_commutes_with_d2b() const;
  /// D1 D4b = D4b D1 to roundoff (true when D4b is absent).
  bool d1_commutes_with_d4b() const;
};

/// Builds D1, D2 (wide = D1^2, narrow per family), upwind pair where natural and D4 = D2^2.
OperatorBundle make_bundle(const DiscretizationSpec& spec);
/// Node spacing (Fourier, FD) or element size (CG, DG).
double grid_spacing(const DiscretizationSpec& spec);

bool commute(const Matrix& a, const Matrix& b, double rel_tol = 1e-10);

enum class InvariantKind { linear, quadratic, cubic };

std::string to_string(InvariantKind k);

struct Invariant {
  std::string name;
  std::string description;
  InvariantKind kind = InvariantKind::linear;
  /// Conserved by the semidiscretization under its hypotheses (false: diagnostic).
  bool conserved = false;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
};

class InvariantSet {
 public:
  std::vector<Invariant> items;

  const Invariant& get(const std::string& name) const;
  bool contains(const std::string& name) const;
  std::vector<std::string> names() const;
  std::vector<double> values(const Vector& state) const;
};

class Semidiscretization {
 public:
  virtual ~Semidiscretization() = default;

  virtual Equation equation() const = 0;
  virtual void rhs(const Vector& state, Vector& dstate) const = 0;
  /// Adds the source g (strong form, stacked for systems) through the equation's elliptic inverse.
  virtual void add_source(const Vector& g, Vector& dstate) const = 0;
  virtual const InvariantSet& invariants() const = 0;

  Vector rhs(const Vector& state) const;
  Index grid_size() const { return grid().size(); }
  Index state_size() const { return grid_size() * components(equation()); }
  const Grid& grid() const { return d1().grid; }
  const MassMatrix& mass() const { return d1().M; }
  virtual const SbpOperator1& d1() const = 0;
  /// Mass-matrix norm of a state (sum over components).
  double norm(const Vector& state) const;
};

using SemidiscretizationPtr = std::shared_ptr<const Semidiscretization>;

struct EquationParameters {
  /// Camassa-Holm split parameter.
  double alpha = 0.5;
};

SemidiscretizationPtr make_bbm(const OperatorBundle& bundle);
SemidiscretizationPtr make_bbm_dissipative(const OperatorBundle& bundle);
SemidiscretizationPtr make_fw(const OperatorBundle& bundle);
SemidiscretizationPtr make_ch(const OperatorBundle& bundle, double alpha = 0.5);
SemidiscretizationPtr make_dp(const OperatorBundle& bundle);
SemidiscretizationPtr make_hh(const OperatorBundle& bundle);
SemidiscretizationPtr make_bbm_bbm(const OperatorBundle& bundle);
/// Reflecting walls; D1 must be bounded.
SemidiscretizationPtr make_bbm_bbm_reflecting(const SbpOperator1& d1);

SemidiscretizationPtr make_semidiscretization(Equation e, const OperatorBundle& bundle,
                                              const EquationParameters& params = {});

/// Splits a BBM-BBM state into (eta, u) views.
inline auto eta_part(const Vector& s) { return s.head(s.size() / 2); }
inline auto u_part(const Vector& s) { return s.tail(s.size() / 2); }
Vector stack(const Vector& eta, const Vector& u);

}  // namespace sbpwave
