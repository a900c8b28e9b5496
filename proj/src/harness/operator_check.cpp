#include "sbpwave/harness/operator_check.hpp"

#include "sbpwave/elliptic.hpp"
#include "sbpwave/equations.hpp"
#include "sbpwave/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <random>

namespace sbpwave::harness {

namespace {

constexpr double identity_tolerance = 1e-11;
const Domain unit{0.0, 1.0};
const Domain golden_domain{-1.0, 3.0};

Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
  Matrix m(static_cast<Index>(r.size()), static_cast<Index>(r.begin()->size()));
  Index i = 0;
  for (const auto& row : r) {
    Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  Vector operator()(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = dist_(rng_);
    return v;
  }

 private:
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> dist_{-1.0, 1.0};
};

struct NamedMatrix {
  std::string name;
  MassMatrix M;
  Matrix D;
};

struct NamedD2 {
  std::string name;
  SbpOperator2 op;
};

struct CommutingPair {
  std::string name;
  SbpOperator1 d1;
  SbpOperator2 d2;
};

struct NamedUpwind {
  std::string name;
  UpwindPair pair;
};

// Every periodic operator the lemma suite samples.
struct PeriodicCatalog {
  std::vector<NamedMatrix> derivatives;
  std::vector<NamedD2> second;
  std::vector<CommutingPair> commuting;
  std::vector<NamedUpwind> upwind;

  void add_d1(const SbpOperator1& op) { derivatives.push_back({op.name, op.M, op.D1}); }
  void add_d2(const SbpOperator2& op) {
    derivatives.push_back({op.name, op.M, op.D2});
    second.push_back({op.name, op});
  }
  void add_d4(const SbpOperator4& op) { derivatives.push_back({op.name, op.M, op.D4}); }
  void add_upwind(const UpwindPair& p) {
    derivatives.push_back({p.name + " D+", p.M, p.Dplus});
    derivatives.push_back({p.name + " D-", p.M, p.Dminus});
    upwind.push_back({p.name, p});
  }
  void add_pair(const SbpOperator1& d1, const SbpOperator2& d2) {
    if (commute(d1.D1, d2.D2)) commuting.push_back({d1.name + " / " + d2.name, d1, d2});
  }
};

PeriodicCatalog periodic_catalog() {
  PeriodicCatalog c;
  const Index n = 32;
  for (int order : {2, 4, 6, 8}) {
    const auto d1 = fd_periodic_d1(n, unit, order);
    const auto narrow = fd_periodic_d2(n, unit, order, StencilKind::narrow);
    const auto wide = fd_periodic_d2(n, unit, order, StencilKind::wide);
    c.add_d1(d1);
    c.add_d2(narrow);
    c.add_d2(wide);
    c.add_d4(square_d2(narrow));
    c.add_pair(d1, narrow);
    c.add_pair(d1, wide);
  }
  for (int order = 2; order <= 8; ++order) {
    const auto up = fd_periodic_upwind(n, unit, order);
    c.add_upwind(up);
    c.add_d2(compose_upwind(up, UpwindComposition::minus_plus));
  }
  const auto f1 = fourier_d1(n, unit);
  const auto fn = fourier_d2(n, unit, StencilKind::narrow);
  const auto fw = fourier_d2(n, unit, StencilKind::wide);
  c.add_d1(f1);
  c.add_d2(fn);
  c.add_d2(fw);
  c.add_d4(square_d2(fn));
  c.add_pair(f1, fn);
  c.add_pair(f1, fw);
  for (int p = 1; p <= 6; ++p) {
    const auto elems = uniform_elements(p, 6, unit);
    const auto cg = couple_cg(elems, unit, true);
    const auto dg = couple_dg(elems, unit, true);
    const auto up = couple_dg_upwind(elems, unit, true);
    const auto cg_narrow = couple_cg_d2(elems, unit, true);
    const auto cg_wide = square_d1(cg);
    const auto dg_wide = square_d1(dg);
    c.add_d1(cg);
    c.add_d1(dg);
    c.add_upwind(up);
    c.add_d2(cg_narrow);
    c.add_d2(cg_wide);
    c.add_d2(dg_wide);
    c.add_d2(compose_upwind(up, UpwindComposition::plus_minus));
    c.add_d4(square_d2(cg_narrow));
    c.add_pair(cg, cg_wide);
    c.add_pair(dg, dg_wide);
  }
  return c;
}

CheckEntry entry(const std::string& group, const std::string& name, double residual, double tolerance,
                 const std::string& detail = {}) {
  return {group, name, residual, tolerance, residual <= tolerance, detail};
}

// Verification of every shipped family --------------------------------------

SbpOperator1 element_operator(int p) {
  const ElementOperator e = lobatto_element(p);
  SbpOperator1 op;
  op.grid.nodes = e.nodes;
  op.grid.x_min = e.left();
  op.grid.x_max = e.right();
  op.M = MassMatrix::diagonal(e.weights);
  op.D1 = e.D1;
  op.accuracy_order = e.accuracy_order;
  op.name = "Lobatto element p=" + std::to_string(p);
  return op;
}

void check_operators(OperatorCheckReport& r, bool inject_fault) {
  std::vector<VerificationReport> reports;
  for (int order : {2, 4, 6, 8}) {
    auto d1 = fd_periodic_d1(32, unit, order);
    if (inject_fault && order == 4) {
      d1.D1(3, 5) += 1e-3 * max_abs(d1.D1);
      d1.name += " (injected fault)";
    }
    reports.push_back(verify_sbp(d1));
    const auto narrow = fd_periodic_d2(32, unit, order, StencilKind::narrow);
    reports.push_back(verify_sbp(narrow));
    reports.push_back(verify_sbp(fd_periodic_d2(32, unit, order, StencilKind::wide)));
    reports.push_back(verify_sbp(square_d2(narrow)));
  }
  for (int order = 2; order <= 8; ++order) reports.push_back(verify_sbp(fd_periodic_upwind(32, unit, order)));
  reports.push_back(verify_sbp(fourier_d1(32, unit)));
  reports.push_back(verify_sbp(fourier_d2(32, unit, StencilKind::narrow)));
  reports.push_back(verify_sbp(fourier_d2(32, unit, StencilKind::wide)));
  reports.push_back(verify_sbp(square_d2(fourier_d2(32, unit, StencilKind::narrow))));
  std::vector<CheckResult> compat;
  for (int p = 1; p <= 6; ++p) {
    reports.push_back(verify_sbp(element_operator(p)));
    for (bool periodic : {false, true}) {
      const auto elems = uniform_elements(p, 6, unit);
      const auto cg = couple_cg(elems, unit, periodic);
      const auto up = couple_dg_upwind(elems, unit, periodic);
      const auto narrow = couple_cg_d2(elems, unit, periodic);
      reports.push_back(verify_sbp(cg));
      reports.push_back(verify_sbp(couple_dg(elems, unit, periodic)));
      reports.push_back(verify_sbp(up));
      reports.push_back(verify_sbp(couple_cg_upwind(elems, unit, periodic)));
      reports.push_back(verify_sbp(narrow));
      reports.push_back(verify_sbp(square_d1(cg)));
      reports.push_back(verify_sbp(compose_upwind(up, UpwindComposition::plus_minus)));
      reports.push_back(verify_sbp(compose_upwind(up, UpwindComposition::minus_plus)));
      if (periodic) reports.push_back(verify_sbp(square_d2(narrow)));
      auto c = verify_compatibility(cg, narrow);
      c.name = "compatibility " + cg.name;
      compat.push_back(c);
    }
  }
  for (const auto& rep : reports) {
    CheckEntry e = entry("operators", rep.operator_name, rep.max_residual(), identity_tolerance, rep.failures());
    e.passed = e.passed && rep.passed();
    if (rep.accuracy_order_claimed > 0)
      e.detail += (e.detail.empty() ? "" : "; ") + std::string("order claimed ") +
                  std::to_string(rep.accuracy_order_claimed) + " found " + std::to_string(rep.accuracy_order_found);
    r.operators.push_back(e);
  }
  for (const auto& c : compat) {
    CheckEntry e = entry("operators", c.name, c.residual, c.tolerance);
    e.passed = c.passed;
    r.operators.push_back(e);
  }
}

// Printed example matrices -----------------------------------------------------

void golden(OperatorCheckReport& r, const std::string& name, const Matrix& got, const Matrix& want, double tol) {
  if (got.rows() != want.rows() || got.cols() != want.cols()) {
    r.goldens.push_back({"goldens", name, INFINITY, tol, false, "shape mismatch"});
    return;
  }
  const double scale = std::max(1.0, max_abs(want));
  r.goldens.push_back(entry("goldens", name, max_abs(got - want) / scale, tol));
}

void check_goldens(OperatorCheckReport& r, double tol) {
  {
    const auto elems = uniform_elements(1, 2, golden_domain);
    const auto d1 = couple_dg(elems, golden_domain, true);
    const auto up = couple_dg_upwind(elems, golden_domain, true);
    const double h = 0.5, q = 0.25, f = 1.25;
    golden(r, "DG p=1 periodic D1", d1.D1, rows({{0, h, 0, -h}, {-h, 0, h, 0}, {0, -h, 0, h}, {h, 0, -h, 0}}), tol);
    golden(r, "DG p=1 periodic D-", up.Dminus, rows({{h, h, 0, -1}, {-h, h, 0, 0}, {0, -1, h, h}, {0, 0, -h, h}}), tol);
    golden(r, "DG p=1 periodic D+", up.Dplus, rows({{-h, h, 0, 0}, {-h, -h, 1, 0}, {0, 0, -h, h}, {1, 0, -h, -h}}), tol);
    golden(r, "DG p=1 periodic M D-D+ D1", d1.M.left_multiply(up.Dminus * up.Dplus * d1.D1),
           rows({{q, -f, -q, f}, {q, -q, -q, q}, {-q, f, q, -f}, {-q, q, q, -q}}), tol);
    golden(r, "DG p=1 periodic M D+D- D1", d1.M.left_multiply(up.Dplus * up.Dminus * d1.D1),
           rows({{q, -q, -q, q}, {f, -q, -f, q}, {-q, q, q, -q}, {-f, q, f, -q}}), tol);
  }
  {
    const auto elems = uniform_elements(2, 2, golden_domain);
    const auto d1 = couple_cg(elems, golden_domain, true);
    const auto d2 = couple_cg_d2(elems, golden_domain, true);
    const double h = 0.5, t = 4.0 / 3.0;
    const Vector m = (Vector(4) << 2.0 / 3.0, 4.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0).finished();
    golden(r, "CG p=2 periodic M", d1.M.to_dense(), m.asDiagonal().toDenseMatrix(), tol);
    golden(r, "CG p=2 periodic D1", d1.D1, rows({{0, 1, 0, -1}, {-h, 0, h, 0}, {0, -1, 0, 1}, {h, 0, -h, 0}}), tol);
    golden(r, "CG p=2 periodic D2", d2.D2,
           rows({{-3.5, 2, -h, 2}, {1, -2, 1, 0}, {-h, 2, -3.5, 2}, {1, 0, 1, -2}}), tol);
    golden(r, "CG p=2 periodic M D2 D1", d1.M.left_multiply(d2.D2 * d1.D1),
           rows({{0, -2, 0, 2}, {t, 0, -t, 0}, {0, 2, 0, -2}, {-t, 0, t, 0}}), tol);
  }
  {
    // uniform bounded mesh of 5 linear elements on [0, 1]
    const Domain d{0.0, 1.0};
    const Index k = 5;
    const double dx = 0.2;
    const auto elems = uniform_elements(1, k, d);
    const auto d1 = couple_cg(elems, d, false);
    const auto d2 = couple_cg_d2(elems, d, false);
    Vector w = Vector::Constant(k + 1, dx);
    w(0) = w(k) = 0.5 * dx;
    Matrix e1 = Matrix::Zero(k + 1, k + 1), e2 = Matrix::Zero(k + 1, k + 1);
    e1(0, 0) = -1.0 / dx;
    e1(0, 1) = 1.0 / dx;
    e1(k, k - 1) = -1.0 / dx;
    e1(k, k) = 1.0 / dx;
    for (Index i = 1; i < k; ++i) {
      e1(i, i - 1) = -0.5 / dx;
      e1(i, i + 1) = 0.5 / dx;
      e2(i, i - 1) = 1.0 / (dx * dx);
      e2(i, i) = -2.0 / (dx * dx);
      e2(i, i + 1) = 1.0 / (dx * dx);
    }
    golden(r, "CG p=1 bounded M", d1.M.to_dense(), w.asDiagonal().toDenseMatrix(), tol);
    golden(r, "CG p=1 bounded D1", d1.D1, e1, tol);
    golden(r, "CG p=1 bounded D2", d2.D2, e2, tol);
  }
}

// Lemmas ---------------------------------------------------------------------

void check_lemmas(OperatorCheckReport& r, const OperatorCheckOptions& o) {
  const PeriodicCatalog c = periodic_catalog();
  Sampler sample(o.seed);
  const double tol = o.lemma_tolerance;

  for (const auto& d : c.derivatives) {
    const Vector m1 = d.M.apply(Vector::Ones(d.D.rows()));
    const Matrix abs_d = d.D.cwiseAbs();
    double worst = 0.0;
    for (int k = 0; k < o.vectors; ++k) {
      const Vector v = sample(d.D.cols());
      const double scale = m1.cwiseAbs().dot(abs_d * v.cwiseAbs());
      worst = std::max(worst, std::abs(m1.dot(d.D * v)) / scale);
    }
    r.lemmas.push_back(entry("lemmas", "1^T M D = 0: " + d.name, worst, tol));
  }

  for (const auto& d : c.second) {
    const EllipticSolver s = make_solver(d.op, 1.0, -1.0);
    const Vector m1 = d.op.M.apply(Vector::Ones(d.op.size()));
    double worst = 0.0;
    for (int k = 0; k < o.vectors; ++k) {
      const Vector w = sample(d.op.size());
      const Vector v = s.apply_inverse(w);
      const double scale = m1.cwiseAbs().dot(v.cwiseAbs()) + m1.cwiseAbs().dot(w.cwiseAbs());
      worst = std::max(worst, std::abs(m1.dot(v) - m1.dot(w)) / scale);
    }
    r.lemmas.push_back(entry("lemmas", "1^T M (I-D2)^-1 = 1^T M: " + d.name, worst, tol));
  }

  for (const auto& p : c.commuting) {
    const EllipticSolver s = make_solver(p.d2, 1.0, -1.0);
    const MassMatrix& M = p.d1.M;
    auto apply = [&](const Vector& v) { return s.apply_inverse(p.d1.D1 * v); };
    double worst = 0.0;
    for (int k = 0; k < o.vectors; ++k) {
      const Vector u = sample(p.d1.size()), v = sample(p.d1.size());
      const Vector su = apply(u), sv = apply(v);
      const double scale = M.norm(u) * M.norm(sv) + M.norm(v) * M.norm(su);
      worst = std::max(worst, std::abs(M.inner(u, sv) + M.inner(v, su)) / scale);
    }
    r.lemmas.push_back(entry("lemmas", "M (I-D2)^-1 D1 skew: " + p.name, worst, tol));
  }

  for (const auto& up : c.upwind) {
    const MassMatrix& M = up.pair.M;
    for (auto order : {UpwindComposition::minus_plus, UpwindComposition::plus_minus}) {
      const bool minus = order == UpwindComposition::minus_plus;
      const EllipticSolver s = make_solver(compose_upwind(up.pair, order), 1.0, -1.0);
      const Matrix& d = minus ? up.pair.Dminus : up.pair.Dplus;
      double worst = 0.0;
      for (int k = 0; k < o.vectors; ++k) {
        const Vector u = sample(up.pair.size());
        const Vector su = s.apply_inverse(d * u);
        const double q = M.inner(u, su) / (M.norm(u) * M.norm(su));
        worst = std::max(worst, minus ? -q : q);
      }
      worst = std::max(worst, 0.0);
      r.lemmas.push_back(entry("lemmas",
                               std::string(minus ? "M (I-D-D+)^-1 D- >= 0: " : "M (I-D+D-)^-1 D+ <= 0: ") +
                                   up.name,
                               worst, tol));
    }
  }
}

// Non-commuting counterexamples -------------------------------------------------

void counterexample(OperatorCheckReport& r, const std::string& name, const SbpOperator1& d1, const Matrix& d2) {
  const Matrix mdd = d1.M.left_multiply(d2 * d1.D1);
  const double scale = max_abs(mdd);
  const double skew_defect = max_abs(mdd + mdd.transpose()) / scale;
  const double commutator = max_abs(d1.D1 * d2 - d2 * d1.D1) / (max_abs(d1.D1) * max_abs(d2));
  const auto [lmax, lmin] = symmetric_eigen_range(mdd);
  const bool indefinite = lmin < -1e-12 * scale && lmax > 1e-12 * scale;
  CheckEntry e{"counterexamples", name, skew_defect, 1e-6, skew_defect > 1e-6 && commutator > 1e-6 && indefinite, ""};
  e.detail = "commutator " + std::to_string(commutator) + "; symmetric part eigenvalues [" +
             std::to_string(lmin) + ", " + std::to_string(lmax) + "]";
  r.counterexamples.push_back(e);
}

void check_counterexamples(OperatorCheckReport& r) {
  {
    const auto elems = uniform_elements(2, 2, golden_domain);
    const auto d1 = couple_cg(elems, golden_domain, true);
    counterexample(r, "CG p=2 periodic narrow D2", d1, couple_cg_d2(elems, golden_domain, true).D2);
  }
  {
    const auto elems = uniform_elements(1, 2, golden_domain);
    const auto d1 = couple_dg(elems, golden_domain, true);
    const auto up = couple_dg_upwind(elems, golden_domain, true);
    counterexample(r, "DG p=1 periodic D-D+", d1, up.Dminus * up.Dplus);
    counterexample(r, "DG p=1 periodic D+D-", d1, up.Dplus * up.Dminus);
  }
}

nlohmann::json entries_json(const std::vector<CheckEntry>& v) {
  auto a = nlohmann::json::array();
  for (const auto& e : v)
    a.push_back({{"name", e.name},
                 {"residual", e.residual},
                 {"tolerance", e.tolerance},
                 {"passed", e.passed},
                 {"detail", e.detail}});
  return a;
}

}  // namespace

bool OperatorCheckReport::group_passed(const std::vector<CheckEntry>& entries) {
  return !entries.empty() && std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.passed; });
}

bool OperatorCheckReport::passed() const {
  return group_passed(operators) && group_passed(goldens) && group_passed(lemmas) && group_passed(counterexamples);
}

std::string OperatorCheckReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["seed"] = seed;
  j["vectors_per_lemma"] = vectors;
  j["passed"] = passed();
  j["operators"] = entries_json(operators);
  j["goldens"] = entries_json(goldens);
  j["lemmas"] = entries_json(lemmas);
  j["counterexamples"] = entries_json(counterexamples);
  return j.dump(2);
}

OperatorCheckReport run_operator_check(const OperatorCheckOptions& options) {
  if (options.vectors < 1) throw ConfigurationError("operator check: vectors must be >= 1");
  OperatorCheckReport r;
  r.seed = options.seed;
  r.vectors = options.vectors;
  check_operators(r, options.inject_fault);
  check_goldens(r, options.golden_tolerance);
  check_lemmas(r, options);
  check_counterexamples(r);
  return r;
}

}  // namespace sbpwave::harness
