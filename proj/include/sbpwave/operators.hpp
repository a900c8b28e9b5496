#pragma once

#include "sbpwave/core.hpp"

#include <string>
#include <vector>

namespace sbpwave {

enum class StencilKind { wide, narrow };

std::string to_string(StencilKind kind);
StencilKind stencil_kind_from_string(const std::string& s);

/// First-derivative SBP operator.
struct SbpOperator1 {
  Grid grid;
  MassMatrix M;
  Matrix D1;
  int accuracy_order = 0;
  /// Dense global stencil (Fourier); accuracy is measured on trigonometric modes.
  bool spectral = false;
  std::string name;

  bool periodic() const { return grid.periodic; }
  Index size() const { return grid.size(); }
  Vector eL() const;
  Vector eR() const;
  /// eR eR^T - eL eL^T, or zero when periodic.
  Matrix boundary_matrix() const;
};

/// Upwind first-derivative SBP pair.
struct UpwindPair {
  Grid grid;
  MassMatrix M;
  Matrix Dplus;
  Matrix Dminus;
  int accuracy_order = 0;
  std::string name;

  bool periodic() const { return grid.periodic; }
  Index size() const { return grid.size(); }
  /// (D+ + D-) / 2 as a central operator.
  SbpOperator1 central() const;
};

/// Second-derivative SBP operator. dL, dR are empty in the periodic case.
struct SbpOperator2 {
  Grid grid;
  MassMatrix M;
  Matrix D2;
  Vector dL;
  Vector dR;
  StencilKind kind = StencilKind::narrow;
  int accuracy_order = 0;
  bool spectral = false;
  std::string name;

  bool periodic() const { return grid.periodic; }
  Index size() const { return grid.size(); }
  /// A2 = -M D2 + eR dR^T - eL dL^T (just -M D2 when periodic).
  Matrix A2() const;
};

/// Periodic fourth-derivative SBP operator.
struct SbpOperator4 {
  Grid grid;
  MassMatrix M;
  Matrix D4;
  int accuracy_order = 0;
  bool spectral = false;
  std::string name;

  bool periodic() const { return grid.periodic; }
  Index size() const { return grid.size(); }
};

/// Nodal element operator with diagonal mass and endpoint nodes.
/// Dplus/Dminus default to D1; D2 data defaults to D2 = D1^2 with dL, dR the
/// first and last rows of D1.
struct ElementOperator {
  Vector nodes;
  Vector weights;
  Matrix D1;
  Matrix Dplus;
  Matrix Dminus;
  Matrix D2;
  Vector dL;
  Vector dR;
  int accuracy_order = 0;

  Index size() const { return nodes.size(); }
  double left() const { return nodes(0); }
  double right() const { return nodes(nodes.size() - 1); }
};

// Periodic finite differences -------------------------------------------------

/// Uniform periodic grid x_i = x_min + i (x_max - x_min) / N, i < N.
Grid periodic_grid(Index n, Domain domain);

/// Coefficients c_j, j = -left..right, with sum_j c_j j^k = deriv! delta_{k,deriv}.
std::vector<double> fd_stencil(int left, int right, int deriv);

SbpOperator1 fd_periodic_d1(Index n, Domain domain, int order);
SbpOperator2 fd_periodic_d2(Index n, Domain domain, int order, StencilKind kind);
UpwindPair fd_periodic_upwind(Index n, Domain domain, int order);

// Fourier collocation --------------------------------------------------------

SbpOperator1 fourier_d1(Index n, Domain domain);
/// Narrow: full spectral second derivative (Nyquist kept). Wide: D1^2.
SbpOperator2 fourier_d2(Index n, Domain domain, StencilKind kind);

// Lobatto-Legendre elements ---------------------------------------------------

struct LobattoRule {
  Vector nodes;
  Vector weights;
};

/// Gauss-Lobatto-Legendre nodes and weights on [-1, 1].
LobattoRule lobatto_rule(int p);
/// Reference element on [-1, 1], 1 <= p <= 10.
ElementOperator lobatto_element(int p);
/// Affine map of an element onto [a, b].
ElementOperator map_element(const ElementOperator& reference, double a, double b);
/// K equal Lobatto elements of degree p covering the domain.
std::vector<ElementOperator> uniform_elements(int p, Index k, Domain domain);
/// Wraps a bounded upwind pair (e.g. a DG macro element) as an element.
ElementOperator element_from_upwind(const UpwindPair& pair);

// Couplings -----------------------------------------------------------------

SbpOperator1 couple_dg(const std::vector<ElementOperator>& elements, Domain domain, bool periodic);
UpwindPair couple_dg_upwind(const std::vector<ElementOperator>& elements, Domain domain,
                            bool periodic);
SbpOperator1 couple_cg(const std::vector<ElementOperator>& elements, Domain domain, bool periodic);
UpwindPair couple_cg_upwind(const std::vector<ElementOperator>& elements, Domain domain,
                            bool periodic);
SbpOperator2 couple_cg_d2(const std::vector<ElementOperator>& elements, Domain domain,
                          bool periodic);

// Derived operators ----------------------------------------------------------

/// Wide-stencil D2 = D1^2.
SbpOperator2 square_d1(const SbpOperator1& op);

enum class UpwindComposition { minus_plus, plus_minus };

/// D- D+ or D+ D- as a narrow second-derivative operator.
SbpOperator2 compose_upwind(const UpwindPair& pair, UpwindComposition order);
/// D4 = D2^2 (periodic only).
SbpOperator4 square_d2(const SbpOperator2& op);

}  // namespace sbpwave
