#include "sbpwave/equations.hpp"

#include <sstream>

namespace sbpwave {

std::string to_string(Equation e) {
  switch (e) {
    case Equation::bbm: return "bbm";
    case Equation::fw: return "fw";
    case Equation::ch: return "ch";
    case Equation::dp: return "dp";
    case Equation::hh: return "hh";
    case Equation::bbm_bbm: return "bbm_bbm";
    case Equation::bbm_bbm_reflecting: return "bbm_bbm_reflecting";
    case Equation::bbm_dissipative: return "bbm_dissipative";
  }
  return "unknown";
}

Equation equation_from_string(const std::string& s) {
  for (Equation e : {Equation::bbm, Equation::fw, Equation::ch, Equation::dp, Equation::hh,
                     Equation::bbm_bbm, Equation::bbm_bbm_reflecting, Equation::bbm_dissipative})
    if (to_string(e) == s) return e;
  throw ConfigurationError("unknown equation '" + s + "'");
}

int components(Equation e) {
  return (e == Equation::bbm_bbm || e == Equation::bbm_bbm_reflecting) ? 2 : 1;
}

std::string to_string(Family f) {
  switch (f) {
    case Family::fourier: return "fourier";
    case Family::fd_periodic: return "fd_periodic";
    case Family::fd_upwind: return "fd_upwind";
    case Family::cg: return "cg";
    case Family::dg: return "dg";
  }
  return "unknown";
}

Family family_from_string(const std::string& s) {
  for (Family f : {Family::fourier, Family::fd_periodic, Family::fd_upwind, Family::cg, Family::dg})
    if (to_string(f) == s) return f;
  throw ConfigurationError("unknown discretization family '" + s + "'");
}

std::string to_string(InvariantKind k) {
  switch (k) {
    case InvariantKind::linear: return "linear";
    case InvariantKind::quadratic: return "quadratic";
    case InvariantKind::cubic: return "cubic";
  }
  return "unknown";
}

std::string describe(const DiscretizationSpec& spec) {
  std::ostringstream os;
  os << to_string(spec.family);
  if (spec.family != Family::fourier) os << " p=" << spec.order;
  os << " " << to_string(spec.stencil) << " N=" << spec.n << (spec.periodic ? " periodic" : " bounded");
  return os.str();
}

double grid_spacing(const DiscretizationSpec& spec) {
  return spec.domain.length() / static_cast<double>(spec.n);
}

bool commute(const Matrix& a, const Matrix& b, double rel_tol) {
  const Matrix ab = a * b;
  const double scale = std::max(max_abs(ab), 1e-300);
  return max_abs(ab - b * a) <= rel_tol * scale;
}

bool OperatorBundle::d1_commutes_with_d2b() const { return commute(D1.D1, D2b.D2); }

bool OperatorBundle::d1_commutes_with_d4b() const {
  return !D4b || commute(D1.D1, D4b->D4);
}

OperatorBundle make_bundle(const DiscretizationSpec& spec) {
  OperatorBundle b;
  const bool wide = spec.stencil == StencilKind::wide;
  const bool needs_periodic = spec.family == Family::fourier || spec.family == Family::fd_periodic ||
                              spec.family == Family::fd_upwind;
  if (needs_periodic && !spec.periodic)
    throw ConfigurationError(to_string(spec.family) + " operators are periodic only");
  switch (spec.family) {
    case Family::fourier: {
      b.D1 = fourier_d1(spec.n, spec.domain);
      b.D2a = wide ? square_d1(b.D1) : fourier_d2(spec.n, spec.domain, StencilKind::narrow);
      break;
    }
    case Family::fd_periodic: {
      b.D1 = fd_periodic_d1(spec.n, spec.domain, spec.order);
      b.D2a = wide ? square_d1(b.D1) : fd_periodic_d2(spec.n, spec.domain, spec.order, StencilKind::narrow);
      break;
    }
    case Family::fd_upwind: {
      b.upwind = fd_periodic_upwind(spec.n, spec.domain, spec.order);
      b.D1 = b.upwind->central();
      b.D2a = wide ? square_d1(b.D1) : compose_upwind(*b.upwind, UpwindComposition::minus_plus);
      break;
    }
    case Family::cg: {
      const auto elems = uniform_elements(spec.order, spec.n, spec.domain);
      b.D1 = couple_cg(elems, spec.domain, spec.periodic);
      b.D2a = wide ? square_d1(b.D1) : couple_cg_d2(elems, spec.domain, spec.periodic);
      break;
    }
    case Family::dg: {
      const auto elems = uniform_elements(spec.order, spec.n, spec.domain);
      b.upwind = couple_dg_upwind(elems, spec.domain, spec.periodic);
      b.D1 = couple_dg(elems, spec.domain, spec.periodic);
      b.D2a = wide ? square_d1(b.D1) : compose_upwind(*b.upwind, UpwindComposition::plus_minus);
      break;
    }
  }
  b.D2b = b.D2a;
  if (spec.periodic) {
    b.D4a = square_d2(b.D2a);
    b.D4b = b.D4a;
  }
  b.description = describe(spec);
  return b;
}

}  // namespace sbpwave
