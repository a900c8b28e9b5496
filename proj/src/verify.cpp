#include "sbpwave/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sbpwave {
namespace {

double falling(int k, int i) {
  double f = 1.0;
  for (int j = 0; j < i; ++j) f *= (k - j);
  return f;
}

double row_sum_norm(const Matrix& d) { return d.cwiseAbs().rowwise().sum().maxCoeff(); }

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : num; }

int accuracy_bounded(const Matrix& d, const Grid& grid, int deriv, double tol, int max_order) {
  const double center = 0.5 * (grid.x_min + grid.x_max);
  const double half = 0.5 * grid.length();
  const Vector xi = ((grid.nodes.array() - center) / half).matrix();
  const double dnorm = row_sum_norm(d);
  for (int k = 0; k <= max_order; ++k) {
    const Vector f = xi.array().pow(k).matrix();
    Vector exact = Vector::Zero(xi.size());
    if (k >= deriv)
      exact = (falling(k, deriv) / std::pow(half, deriv) * xi.array().pow(k - deriv)).matrix();
    const double res = (d * f - exact).cwiseAbs().maxCoeff();
    const double scale = dnorm + exact.cwiseAbs().maxCoeff();
    if (safe_ratio(res, scale) > tol) return k - 1;
  }
  return max_order;
}

int accuracy_periodic_local(const Matrix& d, const Grid& grid, int deriv, double tol,
                            int max_order) {
  const double length = grid.length();
  const Index n = d.rows();
  struct Row {
    std::vector<std::pair<double, double>> terms;  // (scaled offset, coefficient)
    double radius = 0.0;
    double abs_sum = 0.0;
  };
  std::vector<Row> rows;
  rows.reserve(static_cast<std::size_t>(n));
  const double amb = 1e-9 * length;
  for (Index i = 0; i < n; ++i) {
    Row r;
    bool ambiguous = false;
    for (Index j = 0; j < n; ++j) {
      const double c = d(i, j);
      if (c == 0.0) continue;
      double off = grid.nodes(j) - grid.nodes(i);
      off -= length * std::round(off / length);
      if (std::abs(std::abs(off) - 0.5 * length) < amb) ambiguous = true;
      r.terms.emplace_back(off, c);
      r.radius = std::max(r.radius, std::abs(off));
      r.abs_sum += std::abs(c);
    }
    if (ambiguous || r.radius == 0.0) continue;
    for (auto& t : r.terms) t.first /= r.radius;
    rows.push_back(std::move(r));
  }
  if (rows.empty()) return -1;
  for (int k = 0; k <= max_order; ++k) {
    for (const auto& r : rows) {
      double v = 0.0;
      for (const auto& [s, c] : r.terms) v += c * std::pow(s, k);
      const double exact = (k == deriv) ? falling(k, deriv) / std::pow(r.radius, deriv) : 0.0;
      if (safe_ratio(std::abs(v - exact), r.abs_sum + std::abs(exact)) > tol) return k - 1;
    }
  }
  return max_order;
}

int accuracy_spectral(const Matrix& d, const Grid& grid, int deriv, double tol) {
  const double length = grid.length();
  const Index n = d.rows();
  const double dnorm = row_sum_norm(d);
  int best = -1;
  for (Index m = 0; m <= (n - 1) / 2; ++m) {
    const double w = 2.0 * std::numbers::pi * static_cast<double>(m) / length;
    const Vector theta = (w * (grid.nodes.array() - grid.x_min)).matrix();
    const double shift = deriv * std::numbers::pi / 2.0;
    const double amp = std::pow(w, deriv);
    const Vector c = theta.array().cos().matrix();
    const Vector s = theta.array().sin().matrix();
    Vector dc = (amp * (theta.array() + shift).cos()).matrix();
    Vector ds = (amp * (theta.array() + shift).sin()).matrix();
    if (deriv == 0) {
      dc = c;
      ds = s;
    }
    if (m == 0 && deriv > 0) {
      dc.setZero();
      ds.setZero();
    }
    const double res = std::max((d * c - dc).cwiseAbs().maxCoeff(), (d * s - ds).cwiseAbs().maxCoeff());
    if (safe_ratio(res, dnorm + amp) > tol) break;
    best = static_cast<int>(2 * m);
  }
  return best;
}

CheckResult make_check(std::string name, double residual, double tol) {
  return {std::move(name), residual, tol, residual <= tol};
}

void mass_checks(VerificationReport& r, const MassMatrix& m, const Grid& grid, double tol) {
  bool positive = true;
  if (m.is_diagonal()) {
    positive = (m.diag().array() > 0.0).all();
  } else {
    positive = Eigen::LLT<Matrix>(m.to_dense()).info() == Eigen::Success;
  }
  r.checks.push_back(make_check("mass_positive_definite", positive ? 0.0 : 1.0, tol));
  r.checks.push_back(make_check("mass_quadrature",
                                std::abs(m.total() - grid.length()) / grid.length(), tol));
}

void kernel_check(VerificationReport& r, const std::string& name, const Matrix& md, double tol) {
  const double scale = md.cwiseAbs().colwise().sum().maxCoeff();
  const Vector row = md.colwise().sum().transpose();
  r.checks.push_back(make_check(name, safe_ratio(row.cwiseAbs().maxCoeff(), scale), tol));
}

void accuracy_check(VerificationReport& r, int claimed, int found) {
  r.accuracy_order_claimed = claimed;
  r.accuracy_order_found = found;
  r.checks.push_back(make_check("accuracy_order", found >= claimed ? 0.0 : 1.0, 0.5));
}

int accuracy_of(const Matrix& d, const Grid& grid, int deriv, bool spectral,
                const VerifyOptions& opts, int claimed) {
  return measure_accuracy(d, grid, deriv, spectral, opts.accuracy_tolerance,
                          std::max(opts.max_probe_order, claimed + 2));
}

}  // namespace

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerificationReport::failures() const {
  std::string out;
  for (const auto& c : checks) {
    if (c.passed) continue;
    if (!out.empty()) out += ", ";
    out += c.name;
  }
  return out;
}

double VerificationReport::max_residual() const {
  double m = 0.0;
  for (const auto& c : checks)
    if (c.name != "accuracy_order") m = std::max(m, c.residual);
  return m;
}

int measure_accuracy(const Matrix& d, const Grid& grid, int derivative, bool spectral,
                     double tolerance, int max_order) {
  if (spectral) return accuracy_spectral(d, grid, derivative, tolerance);
  if (grid.periodic) return accuracy_periodic_local(d, grid, derivative, tolerance, max_order);
  return accuracy_bounded(d, grid, derivative, tolerance, max_order);
}

std::pair<double, double> symmetric_eigen_range(const Matrix& a) {
  const Matrix s = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().maxCoeff(), es.eigenvalues().minCoeff()};
}

VerificationReport verify_sbp(const SbpOperator1& op, const VerifyOptions& opts) {
  VerificationReport r;
  r.operator_name = op.name;
  r.spectral = op.spectral;
  mass_checks(r, op.M, op.grid, opts.tolerance);
  const Matrix md = op.M.left_multiply(op.D1);
  const Matrix res = md + md.transpose() - op.boundary_matrix();
  r.checks.push_back(make_check("sbp_identity", safe_ratio(max_abs(res), max_abs(md)), opts.tolerance));
  if (op.periodic()) kernel_check(r, "one_mass_kernel", md, opts.tolerance);
  accuracy_check(r, op.accuracy_order, accuracy_of(op.D1, op.grid, 1, op.spectral, opts, op.accuracy_order));
  return r;
}

VerificationReport verify_sbp(const UpwindPair& op, const VerifyOptions& opts) {
  VerificationReport r;
  r.operator_name = op.name;
  mass_checks(r, op.M, op.grid, opts.tolerance);
  const Matrix mp = op.M.left_multiply(op.Dplus);
  const Matrix mm = op.M.left_multiply(op.Dminus);
  const double scale = std::max(max_abs(mp), max_abs(mm));
  const SbpOperator1 central = op.central();
  const Matrix res = mp + mm.transpose() - central.boundary_matrix();
  r.checks.push_back(make_check("upwind_identity", safe_ratio(max_abs(res), scale), opts.tolerance));
  const auto [lmax, lmin] = symmetric_eigen_range(mp - mm);
  const double lscale = std::max({std::abs(lmax), std::abs(lmin), scale});
  r.checks.push_back(
      make_check("dissipation_sign", safe_ratio(std::max(lmax, 0.0), lscale), opts.tolerance));
  const Matrix mc = op.M.left_multiply(central.D1);
  const Matrix cres = mc + mc.transpose() - central.boundary_matrix();
  r.checks.push_back(
      make_check("central_identity", safe_ratio(max_abs(cres), max_abs(mc)), opts.tolerance));
  if (op.periodic()) {
    kernel_check(r, "one_mass_kernel_plus", mp, opts.tolerance);
    kernel_check(r, "one_mass_kernel_minus", mm, opts.tolerance);
  }
  const int found = std::min(accuracy_of(op.Dplus, op.grid, 1, false, opts, op.accuracy_order),
                             accuracy_of(op.Dminus, op.grid, 1, false, opts, op.accuracy_order));
  accuracy_check(r, op.accuracy_order, found);
  return r;
}

VerificationReport verify_sbp(const SbpOperator2& op, const VerifyOptions& opts) {
  VerificationReport r;
  r.operator_name = op.name;
  r.spectral = op.spectral;
  mass_checks(r, op.M, op.grid, opts.tolerance);
  const Matrix md = op.M.left_multiply(op.D2);
  if (op.periodic()) {
    r.checks.push_back(make_check("symmetry", safe_ratio(max_abs(md - md.transpose()), max_abs(md)),
                                  opts.tolerance));
    const auto [lmax, lmin] = symmetric_eigen_range(md);
    const double lscale = std::max(std::abs(lmax), std::abs(lmin));
    r.checks.push_back(make_check("negative_semidefinite", safe_ratio(std::max(lmax, 0.0), lscale),
                                  opts.tolerance));
    kernel_check(r, "one_mass_kernel", md, opts.tolerance);
  } else {
    if (op.dL.size() != op.size() || op.dR.size() != op.size()) {
      r.checks.push_back(make_check("boundary_derivatives_present", 1.0, opts.tolerance));
    } else {
      const Matrix a2 = op.A2();
      r.checks.push_back(make_check("a2_symmetry",
                                    safe_ratio(max_abs(a2 - a2.transpose()), max_abs(a2)),
                                    opts.tolerance));
      const auto [lmax, lmin] = symmetric_eigen_range(a2);
      const double lscale = std::max(std::abs(lmax), std::abs(lmin));
      r.checks.push_back(make_check("a2_positive_semidefinite",
                                    safe_ratio(std::max(-lmin, 0.0), lscale), opts.tolerance));
    }
  }
  accuracy_check(r, op.accuracy_order, accuracy_of(op.D2, op.grid, 2, op.spectral, opts, op.accuracy_order));
  return r;
}

VerificationReport verify_sbp(const SbpOperator4& op, const VerifyOptions& opts) {
  VerificationReport r;
  r.operator_name = op.name;
  r.spectral = op.spectral;
  mass_checks(r, op.M, op.grid, opts.tolerance);
  if (!op.periodic()) {
    r.checks.push_back(make_check("periodic_required", 1.0, opts.tolerance));
    return r;
  }
  const Matrix md = op.M.left_multiply(op.D4);
  r.checks.push_back(make_check("symmetry", safe_ratio(max_abs(md - md.transpose()), max_abs(md)),
                                opts.tolerance));
  const auto [lmax, lmin] = symmetric_eigen_range(md);
  const double lscale = std::max(std::abs(lmax), std::abs(lmin));
  r.checks.push_back(make_check("positive_semidefinite", safe_ratio(std::max(-lmin, 0.0), lscale),
                                opts.tolerance));
  kernel_check(r, "one_mass_kernel", md, opts.tolerance);
  accuracy_check(r, op.accuracy_order, accuracy_of(op.D4, op.grid, 4, op.spectral, opts, op.accuracy_order));
  return r;
}

CheckResult verify_compatibility(const SbpOperator1& d1, const SbpOperator2& d2,
                                 const VerifyOptions& opts) {
  if (d1.size() != d2.size()) throw ConfigurationError("verify_compatibility: size mismatch");
  const Matrix k = d2.A2() - d1.D1.transpose() * d1.M.left_multiply(d1.D1);
  const auto [lmax, lmin] = symmetric_eigen_range(k);
  const double scale = std::max(std::abs(lmax), std::abs(lmin));
  return make_check("compatibility", safe_ratio(std::max(-lmin, 0.0), scale), opts.tolerance);
}

}  // namespace sbpwave
