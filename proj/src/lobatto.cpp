#include "sbpwave/operators.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace sbpwave {
namespace {

struct LegendreValues {
  double p;
  double dp;
};

/// P_n(x) and P_n'(x) by the three-term recurrence.
LegendreValues legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = (std::abs(x) == 1.0)
                        ? 0.5 * n * (n + 1.0) * std::pow(x, n + 1)
                        : n * (p0 - x * p1) / (1.0 - x * x);
  return {p1, dp};
}

}  // namespace

LobattoRule lobatto_rule(int p) {
  if (p < 1 || p > 10)
    throw ConfigurationError("Lobatto degree must be in 1..10 (got " + std::to_string(p) + ")");
  LobattoRule rule;
  rule.nodes.resize(p + 1);
  rule.weights.resize(p + 1);
  rule.nodes(0) = -1.0;
  rule.nodes(p) = 1.0;
  // Interior nodes are the roots of P_p'; Newton with P_p'' from Legendre's equation.
  for (int j = 1; j < p; ++j) {
    double x = -std::cos(std::numbers::pi * j / p);
    for (int it = 0; it < 100; ++it) {
      const auto [lp, dlp] = legendre(p, x);
      const double d2lp = (2.0 * x * dlp - p * (p + 1.0) * lp) / (1.0 - x * x);
      const double step = dlp / d2lp;
      x -= step;
      if (std::abs(step) <= 1e-15) break;
    }
    rule.nodes(j) = x;
  }
  for (int j = 0; j <= p / 2; ++j) {
    const double s = 0.5 * (rule.nodes(p - j) - rule.nodes(j));
    rule.nodes(j) = -s;
    rule.nodes(p - j) = s;
  }
  if (p % 2 == 0) rule.nodes(p / 2) = 0.0;
  for (int j = 0; j <= p; ++j) {
    const double lp = legendre(p, rule.nodes(j)).p;
    rule.weights(j) = 2.0 / (p * (p + 1.0) * lp * lp);
  }
  return rule;
}

ElementOperator lobatto_element(int p) {
  const LobattoRule rule = lobatto_rule(p);
  const Index n = p + 1;
  const Vector& x = rule.nodes;
  Vector bary = Vector::Ones(n);
  for (Index j = 0; j < n; ++j)
    for (Index k = 0; k < n; ++k)
      if (k != j) bary(j) /= (x(j) - x(k));
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    double diag = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = bary(j) / bary(i) / (x(i) - x(j));
      diag -= d(i, j);
    }
    d(i, i) = diag;
  }
  ElementOperator e;
  e.nodes = x;
  e.weights = rule.weights;
  e.D1 = d;
  e.Dplus = d;
  e.Dminus = d;
  e.D2 = d * d;
  e.dL = d.row(0).transpose();
  e.dR = d.row(n - 1).transpose();
  e.accuracy_order = p;
  return e;
}

ElementOperator map_element(const ElementOperator& ref, double a, double b) {
  if (!(b > a)) throw ConfigurationError("map_element: empty interval");
  const double ref_len = ref.right() - ref.left();
  const double jac = (b - a) / ref_len;
  ElementOperator e = ref;
  e.nodes = (a + (ref.nodes.array() - ref.left()) * jac).matrix();
  e.nodes(0) = a;
  e.nodes(e.size() - 1) = b;
  e.weights = ref.weights * jac;
  e.D1 = ref.D1 / jac;
  e.Dplus = ref.Dplus / jac;
  e.Dminus = ref.Dminus / jac;
  e.D2 = ref.D2 / (jac * jac);
  e.dL = ref.dL / jac;
  e.dR = ref.dR / jac;
  return e;
}

std::vector<ElementOperator> uniform_elements(int p, Index k, Domain domain) {
  if (k < 1) throw ConfigurationError("uniform_elements: need at least one element");
  if (!(domain.length() > 0.0)) throw ConfigurationError("domain length must be positive");
  const ElementOperator ref = lobatto_element(p);
  std::vector<ElementOperator> out;
  out.reserve(static_cast<std::size_t>(k));
  const double h = domain.length() / static_cast<double>(k);
  for (Index i = 0; i < k; ++i) {
    const double a = domain.x_min + static_cast<double>(i) * h;
    const double b = (i + 1 == k) ? domain.x_max : domain.x_min + static_cast<double>(i + 1) * h;
    out.push_back(map_element(ref, a, b));
  }
  return out;
}

ElementOperator element_from_upwind(const UpwindPair& pair) {
  if (pair.periodic()) throw ConfigurationError("element_from_upwind: pair must be bounded");
  ElementOperator e;
  e.nodes = pair.grid.nodes;
  e.weights = pair.M.diag();
  e.Dplus = pair.Dplus;
  e.Dminus = pair.Dminus;
  e.D1 = 0.5 * (pair.Dplus + pair.Dminus);
  e.D2 = pair.Dplus * pair.Dminus;
  e.dL = pair.Dminus.row(0).transpose();
  e.dR = pair.Dminus.row(e.size() - 1).transpose();
  e.accuracy_order = pair.accuracy_order;
  return e;
}

}  // namespace sbpwave
