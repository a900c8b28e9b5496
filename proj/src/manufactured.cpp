#include "sbpwave/solitary.hpp"

#include <cmath>
#include <numbers>

namespace sbpwave {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double k2pi = 2.0 * std::numbers::pi;

// u = e^{t/2} sin(2 pi (x - t/2)); x-derivative of order n.
double u_dx(double t, double x, int n) {
  return std::exp(0.5 * t) * std::pow(k2pi, n) * std::sin(k2pi * (x - 0.5 * t) + 0.5 * pi * n);
}

double u_dt(double t, double x) {
  const double th = k2pi * (x - 0.5 * t);
  return std::exp(0.5 * t) * (0.5 * std::sin(th) - pi * std::cos(th));
}

// eta = e^t cos(2 pi (x - 2t)).
double eta_dx(double t, double x, int n) {
  return std::exp(t) * std::pow(k2pi, n) * std::cos(k2pi * (x - 2.0 * t) + 0.5 * pi * n);
}

double eta_dt(double t, double x) {
  const double th = k2pi * (x - 2.0 * t);
  return std::exp(t) * (std::cos(th) + 2.0 * k2pi * std::sin(th));
}

}  // namespace

Vector ManufacturedCase::state(const Vector& x, double t) const {
  Vector u_(x.size());
  for (Index i = 0; i < x.size(); ++i) u_(i) = u(t, x(i));
  if (!eta) return u_;
  Vector e(x.size());
  for (Index i = 0; i < x.size(); ++i) e(i) = eta(t, x(i));
  return stack(e, u_);
}

Vector ManufacturedCase::source(const Vector& x, double t) const {
  Vector g(x.size());
  for (Index i = 0; i < x.size(); ++i) g(i) = source_u(t, x(i));
  if (!source_eta) return g;
  Vector ge(x.size());
  for (Index i = 0; i < x.size(); ++i) ge(i) = source_eta(t, x(i));
  return stack(ge, g);
}

ManufacturedCase manufactured_case(Equation equation, bool periodic) {
  ManufacturedCase mc;
  mc.equation = equation;
  mc.periodic = periodic;
  mc.domain = {0.0, 1.0};
  const double e2 = 1.0 + k2pi * k2pi;
  const bool scalar = equation != Equation::bbm_bbm && equation != Equation::bbm_bbm_reflecting;
  if (scalar || equation == Equation::bbm_bbm) {
    if (!periodic)
      throw ConfigurationError("manufactured_case: " + to_string(equation) + " is provided for periodic domains only");
    mc.u = [](double t, double x) { return u_dx(t, x, 0); };
  }
  switch (equation) {
    case Equation::bbm:
    case Equation::bbm_dissipative:
      mc.source_u = [e2](double t, double x) {
        const double u = u_dx(t, x, 0), u1 = u_dx(t, x, 1);
        return e2 * u_dt(t, x) + u * u1 + u1;
      };
      break;
    case Equation::fw:
      mc.source_u = [e2](double t, double x) {
        const double u = u_dx(t, x, 0), u1 = u_dx(t, x, 1), u2 = u_dx(t, x, 2), u3 = u_dx(t, x, 3);
        return e2 * u_dt(t, x) + u * u1 - 3.0 * u1 * u2 - u * u3 + u1;
      };
      break;
    case Equation::ch:
      mc.source_u = [e2](double t, double x) {
        const double u = u_dx(t, x, 0), u1 = u_dx(t, x, 1), u2 = u_dx(t, x, 2), u3 = u_dx(t, x, 3);
        return e2 * u_dt(t, x) + 3.0 * u * u1 - 2.0 * u1 * u2 - u * u3;
      };
      break;
    case Equation::dp:
      mc.source_u = [e2](double t, double x) {
        const double u = u_dx(t, x, 0), u1 = u_dx(t, x, 1), u2 = u_dx(t, x, 2), u3 = u_dx(t, x, 3);
        return e2 * u_dt(t, x) + 4.0 * u * u1 - 3.0 * u1 * u2 - u * u3;
      };
      break;
    case Equation::hh:
      mc.source_u = [](double t, double x) {
        const double k2 = k2pi * k2pi;
        double d[6];
        for (int n = 0; n < 6; ++n) d[n] = u_dx(t, x, n);
        return (4.0 + 5.0 * k2 + k2 * k2) * u_dt(t, x) + d[0] * d[5] + 2.0 * d[1] * d[4] -
               5.0 * d[0] * d[3] - 10.0 * d[1] * d[2] + 12.0 * d[0] * d[1];
      };
      break;
    case Equation::bbm_bbm:
      mc.eta = [](double t, double x) { return eta_dx(t, x, 0); };
      mc.source_eta = [e2](double t, double x) {
        const double eta = eta_dx(t, x, 0), eta1 = eta_dx(t, x, 1);
        const double u = u_dx(t, x, 0), u1 = u_dx(t, x, 1);
        return e2 * eta_dt(t, x) + u1 + eta1 * u + eta * u1;
      };
      mc.source_u = [e2](double t, double x) {
        const double u = u_dx(t, x, 0), u1 = u_dx(t, x, 1);
        return e2 * u_dt(t, x) + eta_dx(t, x, 1) + u * u1;
      };
      break;
    case Equation::bbm_bbm_reflecting:
      if (periodic) throw ConfigurationError("manufactured_case: reflecting BBM-BBM needs a bounded domain");
      // eta = e^{2t} cos(pi x), u = e^t x sin(pi x)
      mc.eta = [](double t, double x) { return std::exp(2.0 * t) * std::cos(pi * x); };
      mc.u = [](double t, double x) { return std::exp(t) * x * std::sin(pi * x); };
      mc.source_eta = [](double t, double x) {
        const double eta = std::exp(2.0 * t) * std::cos(pi * x);
        const double eta1 = -pi * std::exp(2.0 * t) * std::sin(pi * x);
        const double u = std::exp(t) * x * std::sin(pi * x);
        const double u1 = std::exp(t) * (std::sin(pi * x) + pi * x * std::cos(pi * x));
        return 2.0 * (1.0 + pi * pi) * eta + u1 + eta1 * u + eta * u1;
      };
      mc.source_u = [](double t, double x) {
        const double eta1 = -pi * std::exp(2.0 * t) * std::sin(pi * x);
        const double u = std::exp(t) * x * std::sin(pi * x);
        const double u1 = std::exp(t) * (std::sin(pi * x) + pi * x * std::cos(pi * x));
        const double u2 = std::exp(t) * (2.0 * pi * std::cos(pi * x) - pi * pi * x * std::sin(pi * x));
        return u - u2 + eta1 + u * u1;
      };
      break;
  }
  return mc;
}

RhsFunction manufactured_rhs(const SemidiscretizationPtr& sd, const ManufacturedCase& mc) {
  if (sd->equation() != mc.equation &&
      !(sd->equation() == Equation::bbm_dissipative && mc.equation == Equation::bbm))
    throw ConfigurationError("manufactured_rhs: equation mismatch");
  const Vector x = sd->grid().nodes;
  return [sd, mc, x](double t, const Vector& u, Vector& du) {
    sd->rhs(u, du);
    sd->add_source(mc.source(x, t), du);
  };
}

}  // namespace sbpwave
