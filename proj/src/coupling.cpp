#include "sbpwave/operators.hpp"

#include <cmath>
#include <string>

namespace sbpwave {
namespace {

void check_elements(const std::vector<ElementOperator>& elements, Domain domain) {
  if (elements.size() < 2) throw ConfigurationError("coupling requires at least two elements");
  const double tol = 1e-12 * domain.length();
  if (std::abs(elements.front().left() - domain.x_min) > tol ||
      std::abs(elements.back().right() - domain.x_max) > tol)
    throw ConfigurationError("elements do not span the domain");
  for (std::size_t k = 0; k + 1 < elements.size(); ++k) {
    if (std::abs(elements[k].right() - elements[k + 1].left()) > tol)
      throw ConfigurationError("interface coordinates of elements " + std::to_string(k) + " and " +
                               std::to_string(k + 1) + " do not match");
  }
  for (const auto& e : elements)
    if (e.size() < 2 || e.weights.size() != e.size()) throw ConfigurationError("malformed element");
}

int min_order(const std::vector<ElementOperator>& elements) {
  int p = elements.front().accuracy_order;
  for (const auto& e : elements) p = std::min(p, e.accuracy_order);
  return p;
}

std::string mesh_label(const std::vector<ElementOperator>& elements, bool periodic) {
  return "K=" + std::to_string(elements.size()) + ", p=" + std::to_string(min_order(elements)) +
         (periodic ? ", periodic" : ", bounded");
}

// DG ---------------------------------------------------------------------------

struct DgLayout {
  std::vector<Index> offset;
  Index n = 0;
};

DgLayout dg_layout(const std::vector<ElementOperator>& elements) {
  DgLayout l;
  for (const auto& e : elements) {
    l.offset.push_back(l.n);
    l.n += e.size();
  }
  return l;
}

Grid dg_grid(const std::vector<ElementOperator>& elements, const DgLayout& l, Domain domain,
             bool periodic) {
  Grid g;
  g.x_min = domain.x_min;
  g.x_max = domain.x_max;
  g.periodic = periodic;
  g.nodes.resize(l.n);
  for (std::size_t k = 0; k < elements.size(); ++k)
    g.nodes.segment(l.offset[k], elements[k].size()) = elements[k].nodes;
  return g;
}

Vector dg_weights(const std::vector<ElementOperator>& elements, const DgLayout& l) {
  Vector w(l.n);
  for (std::size_t k = 0; k < elements.size(); ++k)
    w.segment(l.offset[k], elements[k].size()) = elements[k].weights;
  return w;
}

Matrix dg_block_diagonal(const std::vector<ElementOperator>& elements, const DgLayout& l,
                         Matrix ElementOperator::*field) {
  Matrix d = Matrix::Zero(l.n, l.n);
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const Index s = elements[k].size();
    d.block(l.offset[k], l.offset[k], s, s) = elements[k].*field;
  }
  return d;
}

/// Calls f(left element, right element) for each interface (including the wrap).
template <typename F>
void for_each_interface(std::size_t count, bool periodic, F f) {
  for (std::size_t k = 0; k + 1 < count; ++k) f(k, k + 1);
  if (periodic) f(count - 1, 0);
}

// CG ---------------------------------------------------------------------------

struct CgLayout {
  std::vector<Index> offset;
  Index n = 0;
  bool periodic = false;

  Index global(std::size_t k, Index j) const {
    const Index g = offset[k] + j;
    return periodic ? g % n : g;
  }
};

CgLayout cg_layout(const std::vector<ElementOperator>& elements, bool periodic) {
  CgLayout l;
  l.periodic = periodic;
  Index total = 0;
  for (const auto& e : elements) {
    l.offset.push_back(total);
    total += e.size() - 1;
  }
  l.n = periodic ? total : total + 1;
  return l;
}

Grid cg_grid(const std::vector<ElementOperator>& elements, const CgLayout& l, Domain domain,
             bool periodic) {
  Grid g;
  g.x_min = domain.x_min;
  g.x_max = domain.x_max;
  g.periodic = periodic;
  g.nodes.resize(l.n);
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const auto& e = elements[k];
    for (Index j = 0; j < e.size(); ++j) {
      if (periodic && k + 1 == elements.size() && j + 1 == e.size()) continue;
      g.nodes(l.global(k, j)) = e.nodes(j);
    }
  }
  return g;
}

Vector cg_weights(const std::vector<ElementOperator>& elements, const CgLayout& l) {
  Vector w = Vector::Zero(l.n);
  for (std::size_t k = 0; k < elements.size(); ++k)
    for (Index j = 0; j < elements[k].size(); ++j) w(l.global(k, j)) += elements[k].weights(j);
  return w;
}

void scatter_add(Matrix& global, const CgLayout& l, std::size_t k, const Matrix& local) {
  for (Index i = 0; i < local.rows(); ++i)
    for (Index j = 0; j < local.cols(); ++j) global(l.global(k, i), l.global(k, j)) += local(i, j);
}

Vector scatter_vector(const CgLayout& l, std::size_t k, const Vector& local) {
  Vector out = Vector::Zero(l.n);
  for (Index j = 0; j < local.size(); ++j) out(l.global(k, j)) += local(j);
  return out;
}

Matrix cg_assemble_derivative(const std::vector<ElementOperator>& elements, const CgLayout& l,
                              const Vector& weights, Matrix ElementOperator::*field) {
  Matrix q = Matrix::Zero(l.n, l.n);
  for (std::size_t k = 0; k < elements.size(); ++k)
    scatter_add(q, l, k, elements[k].weights.asDiagonal() * (elements[k].*field));
  return weights.cwiseInverse().asDiagonal() * q;
}

}  // namespace

SbpOperator1 couple_dg(const std::vector<ElementOperator>& elements, Domain domain, bool periodic) {
  check_elements(elements, domain);
  const DgLayout l = dg_layout(elements);
  Matrix d = dg_block_diagonal(elements, l, &ElementOperator::D1);
  for_each_interface(elements.size(), periodic, [&](std::size_t a, std::size_t b) {
    const auto& el = elements[a];
    const auto& er = elements[b];
    const Index ra = l.offset[a] + el.size() - 1;  // right node of the left element
    const Index lb = l.offset[b];                  // left node of the right element
    const double wl = el.weights(el.size() - 1);
    const double wr = er.weights(0);
    d(ra, ra) -= 0.5 / wl;
    d(ra, lb) += 0.5 / wl;
    d(lb, ra) -= 0.5 / wr;
    d(lb, lb) += 0.5 / wr;
  });
  SbpOperator1 op;
  op.grid = dg_grid(elements, l, domain, periodic);
  op.M = MassMatrix::diagonal(dg_weights(elements, l));
  op.D1 = std::move(d);
  op.accuracy_order = min_order(elements);
  op.name = "couple_dg(" + mesh_label(elements, periodic) + ")";
  return op;
}

UpwindPair couple_dg_upwind(const std::vector<ElementOperator>& elements, Domain domain,
                            bool periodic) {
  check_elements(elements, domain);
  const DgLayout l = dg_layout(elements);
  Matrix dp = dg_block_diagonal(elements, l, &ElementOperator::Dplus);
  Matrix dm = dg_block_diagonal(elements, l, &ElementOperator::Dminus);
  for_each_interface(elements.size(), periodic, [&](std::size_t a, std::size_t b) {
    const auto& el = elements[a];
    const auto& er = elements[b];
    const Index ra = l.offset[a] + el.size() - 1;
    const Index lb = l.offset[b];
    const double wl = el.weights(el.size() - 1);
    const double wr = er.weights(0);
    dp(ra, ra) -= 1.0 / wl;
    dp(ra, lb) += 1.0 / wl;
    dm(lb, ra) -= 1.0 / wr;
    dm(lb, lb) += 1.0 / wr;
  });
  UpwindPair pair;
  pair.grid = dg_grid(elements, l, domain, periodic);
  pair.M = MassMatrix::diagonal(dg_weights(elements, l));
  pair.Dplus = std::move(dp);
  pair.Dminus = std::move(dm);
  pair.accuracy_order = min_order(elements);
  pair.name = "couple_dg_upwind(" + mesh_label(elements, periodic) + ")";
  return pair;
}

SbpOperator1 couple_cg(const std::vector<ElementOperator>& elements, Domain domain, bool periodic) {
  check_elements(elements, domain);
  const CgLayout l = cg_layout(elements, periodic);
  const Vector w = cg_weights(elements, l);
  SbpOperator1 op;
  op.grid = cg_grid(elements, l, domain, periodic);
  op.M = MassMatrix::diagonal(w);
  op.D1 = cg_assemble_derivative(elements, l, w, &ElementOperator::D1);
  op.accuracy_order = min_order(elements);
  op.name = "couple_cg(" + mesh_label(elements, periodic) + ")";
  return op;
}

UpwindPair couple_cg_upwind(const std::vector<ElementOperator>& elements, Domain domain,
                            bool periodic) {
  check_elements(elements, domain);
  const CgLayout l = cg_layout(elements, periodic);
  const Vector w = cg_weights(elements, l);
  UpwindPair pair;
  pair.grid = cg_grid(elements, l, domain, periodic);
  pair.M = MassMatrix::diagonal(w);
  pair.Dplus = cg_assemble_derivative(elements, l, w, &ElementOperator::Dplus);
  pair.Dminus = cg_assemble_derivative(elements, l, w, &ElementOperator::Dminus);
  pair.accuracy_order = min_order(elements);
  pair.name = "couple_cg_upwind(" + mesh_label(elements, periodic) + ")";
  return pair;
}

SbpOperator2 couple_cg_d2(const std::vector<ElementOperator>& elements, Domain domain,
                          bool periodic) {
  check_elements(elements, domain);
  const CgLayout l = cg_layout(elements, periodic);
  const Vector w = cg_weights(elements, l);
  Matrix a = Matrix::Zero(l.n, l.n);
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const auto& e = elements[k];
    const Index last = e.size() - 1;
    // -A2 of the element: M D2 - eR dR^T + eL dL^T.
    Matrix minus_a2 = e.weights.asDiagonal() * e.D2;
    minus_a2.row(last) -= e.dR.transpose();
    minus_a2.row(0) += e.dL.transpose();
    scatter_add(a, l, k, minus_a2);
  }
  SbpOperator2 op;
  if (!periodic) {
    op.dL = scatter_vector(l, 0, elements.front().dL);
    op.dR = scatter_vector(l, elements.size() - 1, elements.back().dR);
    a.row(0) -= op.dL.transpose();
    a.row(l.n - 1) += op.dR.transpose();
  }
  op.grid = cg_grid(elements, l, domain, periodic);
  op.M = MassMatrix::diagonal(w);
  op.D2 = w.cwiseInverse().asDiagonal() * a;
  op.kind = StencilKind::narrow;
  op.accuracy_order = min_order(elements);
  op.name = "couple_cg_d2(" + mesh_label(elements, periodic) + ")";
  return op;
}

}  // namespace sbpwave
