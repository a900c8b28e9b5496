#include "sbpwave/operator_io.hpp"
#include "sbpwave/operators.hpp"
#include "sbpwave/verify.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace sbpwave;
using testing::max_diff;
using testing::rows;

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Closed-form central first-derivative weights of half-width m.
double central_d1_weight(int m, int j) {
  const double s = (j % 2 == 0) ? -1.0 : 1.0;
  return s * factorial(m) * factorial(m) / (j * factorial(m - j) * factorial(m + j));
}

// Closed-form central second-derivative weights of half-width m (j != 0).
double central_d2_weight(int m, int j) {
  const double s = (j % 2 == 0) ? -1.0 : 1.0;
  return 2.0 * s * factorial(m) * factorial(m) / (j * j * factorial(m - j) * factorial(m + j));
}

const Domain golden_domain{-1.0, 3.0};

}  // namespace

TEST_CASE("fd_stencil reproduces closed-form central weights") {
  for (int m = 1; m <= 4; ++m) {
    const auto c1 = fd_stencil(m, m, 1);
    const auto c2 = fd_stencil(m, m, 2);
    double c2_center = 0.0;
    for (int j = 1; j <= m; ++j) {
      CHECK(c1[m + j] == doctest::Approx(central_d1_weight(m, j)).epsilon(1e-13));
      CHECK(c1[m - j] == doctest::Approx(-central_d1_weight(m, j)).epsilon(1e-13));
      CHECK(c2[m + j] == doctest::Approx(central_d2_weight(m, j)).epsilon(1e-13));
      c2_center -= 2.0 * central_d2_weight(m, j);
    }
    CHECK(c2[m] == doctest::Approx(c2_center).epsilon(1e-13));
  }
}

TEST_CASE("fd_periodic_d1 order 2 on N=8") {
  const auto op = fd_periodic_d1(8, {0.0, 8.0}, 2);
  const double dx = 1.0;
  CHECK(op.D1(3, 2) == doctest::Approx(-0.5 / dx));
  CHECK(op.D1(3, 4) == doctest::Approx(0.5 / dx));
  CHECK(op.D1(3, 3) == 0.0);
  CHECK(op.D1(0, 7) == doctest::Approx(-0.5));
  CHECK(op.D1(7, 0) == doctest::Approx(0.5));
  CHECK((op.D1 * Vector::Ones(8)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(op.M.diag().isApproxToConstant(1.0));
}

TEST_CASE("fd_periodic_d1 order 4 mass kernel") {
  const auto op = fd_periodic_d1(16, {0.0, 1.0}, 4);
  const Vector k = (op.M.left_multiply(op.D1)).colwise().sum().transpose();
  CHECK(k.cwiseAbs().maxCoeff() < 1e-12 * max_abs(op.M.left_multiply(op.D1)));
}

TEST_CASE("fd_periodic_d2 narrow and wide") {
  const auto narrow = fd_periodic_d2(8, {0.0, 8.0}, 2, StencilKind::narrow);
  CHECK(narrow.D2(4, 3) == doctest::Approx(1.0));
  CHECK(narrow.D2(4, 4) == doctest::Approx(-2.0));
  CHECK(narrow.D2(4, 5) == doctest::Approx(1.0));
  for (int order : {2, 4, 6, 8}) {
    const auto wide = fd_periodic_d2(16, {0.0, 1.0}, order, StencilKind::wide);
    Vector alt(16);
    for (Index i = 0; i < 16; ++i) alt(i) = (i % 2 == 0) ? 1.0 : -1.0;
    CHECK((wide.D2 * alt).cwiseAbs().maxCoeff() < 1e-10 * max_abs(wide.D2));
    CHECK((wide.D2 * Vector::Ones(16)).cwiseAbs().maxCoeff() < 1e-10 * max_abs(wide.D2));
    CHECK(wide.kind == StencilKind::wide);
  }
}

TEST_CASE("fd construction errors") {
  CHECK_THROWS_AS(fd_periodic_d1(4, {0.0, 1.0}, 4), ConfigurationError);
  CHECK_THROWS_AS(fd_periodic_d1(16, {0.0, 1.0}, 3), ConfigurationError);
  CHECK_THROWS_AS(fd_periodic_d1(16, {1.0, 1.0}, 2), ConfigurationError);
  CHECK_THROWS_AS(fd_periodic_upwind(16, {0.0, 1.0}, 9), ConfigurationError);
}

TEST_CASE("fd_periodic_upwind pairs") {
  const auto p1 = fd_periodic_upwind(8, {0.0, 8.0}, 1);
  CHECK(p1.Dplus(2, 2) == doctest::Approx(-1.0));
  CHECK(p1.Dplus(2, 3) == doctest::Approx(1.0));
  CHECK(p1.Dminus(2, 1) == doctest::Approx(-1.0));
  CHECK(p1.Dminus(2, 2) == doctest::Approx(1.0));
  for (int order = 1; order <= 8; ++order) {
    const auto pair = fd_periodic_upwind(24, {0.0, 1.0}, order);
    CHECK((pair.Dplus * Vector::Ones(24)).cwiseAbs().maxCoeff() < 1e-10 * max_abs(pair.Dplus));
    CHECK((pair.Dminus * Vector::Ones(24)).cwiseAbs().maxCoeff() < 1e-10 * max_abs(pair.Dminus));
    const auto mp = pair.M.left_multiply(pair.Dplus);
    const auto mm = pair.M.left_multiply(pair.Dminus);
    const auto [lmax, lmin] = symmetric_eigen_range(mp - mm);
    CHECK(lmax <= 1e-12 * std::max(std::abs(lmin), 1.0));
    const auto report = verify_sbp(pair);
    CHECK_MESSAGE(report.passed(), report.operator_name, ": ", report.failures());
    CHECK(report.accuracy_order_found >= order);
  }
  // Order-one D-D+ is the classical (1, -2, 1) stencil.
  const auto d2 = compose_upwind(p1, UpwindComposition::minus_plus);
  CHECK(d2.D2(3, 2) == doctest::Approx(1.0));
  CHECK(d2.D2(3, 3) == doctest::Approx(-2.0));
  CHECK(d2.D2(3, 4) == doctest::Approx(1.0));
}

TEST_CASE("fourier_d1 differentiates resolved modes") {
  const Domain d{0.0, 2.0 * std::numbers::pi};
  for (Index n : {8, 9, 16}) {
    const auto op = fourier_d1(n, d);
    const Vector x = op.grid.nodes;
    const Vector s = x.array().sin().matrix();
    const Vector c = x.array().cos().matrix();
    CHECK(max_diff(op.D1 * s, c) < 1e-13);
    const Vector s3 = (3.0 * x.array()).sin().matrix();
    CHECK(max_diff(op.D1 * s3, (3.0 * (3.0 * x.array()).cos()).matrix()) < 1e-12);
    CHECK((op.D1 * Vector::Ones(n)).cwiseAbs().maxCoeff() < 1e-13);
    const Matrix md = op.M.left_multiply(op.D1);
    CHECK(max_abs(md + md.transpose()) < 1e-13);
  }
  // Nyquist mode maps to zero for even N.
  const auto op = fourier_d1(8, d);
  Vector alt(8);
  for (Index i = 0; i < 8; ++i) alt(i) = (i % 2 == 0) ? 1.0 : -1.0;
  CHECK((op.D1 * alt).cwiseAbs().maxCoeff() < 1e-13);
  const auto wide = square_d1(op);
  const Vector x = op.grid.nodes;
  CHECK(max_diff(wide.D2 * x.array().sin().matrix(), -x.array().sin().matrix()) < 1e-13);
  const auto narrow = fourier_d2(8, d, StencilKind::narrow);
  CHECK(max_diff(narrow.D2 * alt, -16.0 * alt) < 1e-12);
  CHECK(max_diff(narrow.D2 * (2.0 * x.array()).cos().matrix(),
                 (-4.0 * (2.0 * x.array()).cos()).matrix()) < 1e-12);
}

TEST_CASE("lobatto_element small degrees") {
  const auto e1 = lobatto_element(1);
  CHECK(e1.nodes(0) == -1.0);
  CHECK(e1.nodes(1) == 1.0);
  CHECK(e1.weights(0) == doctest::Approx(1.0));
  CHECK(e1.weights(1) == doctest::Approx(1.0));
  CHECK(max_diff(e1.D1, rows({{-0.5, 0.5}, {-0.5, 0.5}})) < 1e-15);
  const auto e2 = lobatto_element(2);
  CHECK(e2.weights(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(e2.weights(1) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(e2.weights(2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(lobatto_element(0), ConfigurationError);
  CHECK_THROWS_AS(lobatto_element(11), ConfigurationError);
}

TEST_CASE("lobatto quadrature and differentiation exactness") {
  for (int p = 1; p <= 10; ++p) {
    const auto e = lobatto_element(p);
    const Vector& x = e.nodes;
    for (int k = 0; k <= 2 * p - 1; ++k) {
      const double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
      CHECK(e.weights.dot(x.array().pow(k).matrix()) == doctest::Approx(exact).epsilon(1e-13));
    }
    for (int k = 0; k <= p; ++k) {
      const Vector f = x.array().pow(k).matrix();
      const Vector df = (k == 0) ? Vector::Zero(p + 1) : Vector((k * x.array().pow(k - 1)).matrix());
      CHECK(max_diff(e.D1 * f, df) < 1e-12 * p * p);
    }
    // Interior nodes are the roots of P_p'; check via the SBP identity on [-1, 1].
    const Matrix q = e.weights.asDiagonal() * e.D1;
    Matrix b = Matrix::Zero(p + 1, p + 1);
    b(0, 0) = -1.0;
    b(p, p) = 1.0;
    CHECK(max_abs(q + q.transpose() - b) < 1e-13 * max_abs(q));
  }
}

TEST_CASE("golden: DG p=1 periodic on [-1,3]") {
  const auto elems = uniform_elements(1, 2, golden_domain);
  const auto d1 = couple_dg(elems, golden_domain, true);
  const auto up = couple_dg_upwind(elems, golden_domain, true);
  const double h = 0.5;
  CHECK(max_diff(d1.D1, rows({{0, h, 0, -h}, {-h, 0, h, 0}, {0, -h, 0, h}, {h, 0, -h, 0}})) < 1e-15);
  CHECK(max_diff(up.Dminus, rows({{h, h, 0, -1}, {-h, h, 0, 0}, {0, -1, h, h}, {0, 0, -h, h}})) < 1e-15);
  CHECK(max_diff(up.Dplus, rows({{-h, h, 0, 0}, {-h, -h, 1, 0}, {0, 0, -h, h}, {1, 0, -h, -h}})) < 1e-15);
  CHECK(max_diff(0.5 * (up.Dplus + up.Dminus), d1.D1) < 1e-15);
  const double q = 0.25, f = 1.25;
  const Matrix mmp = d1.M.left_multiply(up.Dminus * up.Dplus * d1.D1);
  const Matrix mpm = d1.M.left_multiply(up.Dplus * up.Dminus * d1.D1);
  CHECK(max_diff(mmp, rows({{q, -f, -q, f}, {q, -q, -q, q}, {-q, f, q, -f}, {-q, q, q, -q}})) < 1e-14);
  CHECK(max_diff(mpm, rows({{q, -q, -q, q}, {f, -q, -f, q}, {-q, q, q, -q}, {-f, q, f, -q}})) < 1e-14);
}

TEST_CASE("golden: CG p=2 periodic on [-1,3]") {
  const auto elems = uniform_elements(2, 2, golden_domain);
  const auto d1 = couple_cg(elems, golden_domain, true);
  const auto d2 = couple_cg_d2(elems, golden_domain, true);
  const double h = 0.5;
  CHECK(d1.size() == 4);
  CHECK(max_diff(d1.M.to_dense(), Vector(Eigen::Vector4d(2.0 / 3, 4.0 / 3, 2.0 / 3, 4.0 / 3)).asDiagonal().toDenseMatrix()) < 1e-15);
  CHECK(max_diff(d1.D1, rows({{0, 1, 0, -1}, {-h, 0, h, 0}, {0, -1, 0, 1}, {h, 0, -h, 0}})) < 1e-14);
  CHECK(max_diff(d2.D2, rows({{-3.5, 2, -h, 2}, {1, -2, 1, 0}, {-h, 2, -3.5, 2}, {1, 0, 1, -2}})) < 1e-13);
  const double t = 4.0 / 3.0;
  CHECK(max_diff(d1.M.left_multiply(d2.D2 * d1.D1),
                 rows({{0, -2, 0, 2}, {t, 0, -t, 0}, {0, 2, 0, -2}, {-t, 0, t, 0}})) < 1e-13);
}

TEST_CASE("golden: CG p=1 bounded uniform mesh") {
  const Domain d{0.0, 1.0};
  const Index k = 5;
  const double dx = 0.2;
  const auto elems = uniform_elements(1, k, d);
  const auto d1 = couple_cg(elems, d, false);
  const auto d2 = couple_cg_d2(elems, d, false);
  REQUIRE(d1.size() == k + 1);
  Vector w = Vector::Constant(k + 1, dx);
  w(0) = w(k) = 0.5 * dx;
  CHECK(max_diff(d1.M.diag(), w) < 1e-15);
  Matrix e1 = Matrix::Zero(k + 1, k + 1);
  Matrix e2 = Matrix::Zero(k + 1, k + 1);
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
  CHECK(max_diff(d1.D1, e1) < 1e-12);
  CHECK(max_diff(d2.D2, e2) < 1e-10);
  CHECK((d2.D2 * d1.grid.nodes).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("coupling validation") {
  auto elems = uniform_elements(2, 3, {0.0, 1.0});
  CHECK_THROWS_AS(couple_dg({elems[0]}, {0.0, 1.0 / 3.0}, false), ConfigurationError);
  elems[1] = map_element(lobatto_element(2), 0.4, 2.0 / 3.0);
  CHECK_THROWS_AS(couple_cg(elems, {0.0, 1.0}, false), ConfigurationError);
  CHECK_THROWS_AS(couple_dg(uniform_elements(2, 3, {0.0, 1.0}), {0.0, 2.0}, false),
                  ConfigurationError);
}

TEST_CASE("DG bounded boundary form") {
  const Domain d{0.0, 2.0};
  const auto op = couple_dg(uniform_elements(3, 4, d), d, false);
  const Matrix md = op.M.left_multiply(op.D1);
  Matrix b = Matrix::Zero(op.size(), op.size());
  b(0, 0) = -1.0;
  b(op.size() - 1, op.size() - 1) = 1.0;
  CHECK(max_abs(md + md.transpose() - b) < 1e-13 * max_abs(md));
}

TEST_CASE("CG upwind average equals central coupling") {
  // Bounded DG upwind macro elements feed the CG upwind coupling.
  const Domain d{0.0, 3.0};
  std::vector<ElementOperator> macros;
  for (int k = 0; k < 3; ++k) {
    const Domain sub{static_cast<double>(k), static_cast<double>(k + 1)};
    macros.push_back(element_from_upwind(couple_dg_upwind(uniform_elements(2, 3, sub), sub, false)));
  }
  for (bool periodic : {false, true}) {
    const auto pair = couple_cg_upwind(macros, d, periodic);
    const auto central = couple_cg(macros, d, periodic);
    CHECK(max_diff(0.5 * (pair.Dplus + pair.Dminus), central.D1) < 1e-12 * max_abs(central.D1));
    const auto report = verify_sbp(pair);
    CHECK_MESSAGE(report.passed(), report.failures());
    if (periodic) {
      const Vector k = pair.M.left_multiply(pair.Dplus).colwise().sum().transpose();
      CHECK(k.cwiseAbs().maxCoeff() < 1e-12 * max_abs(pair.Dplus));
    }
    const auto [lmax, lmin] = symmetric_eigen_range(pair.M.left_multiply(pair.Dplus - pair.Dminus));
    CHECK(lmax <= 1e-12 * std::abs(lmin));
    CHECK(lmin < -1e-3);
  }
}

TEST_CASE("verify_sbp: Fourier and DG examples") {
  const auto f = verify_sbp(fourier_d1(16, {0.0, 2.0 * std::numbers::pi}));
  CHECK(f.passed());
  CHECK(f.accuracy_order_found >= 8);
  const Domain d{0.0, 1.0};
  const auto dg = verify_sbp(couple_dg(uniform_elements(3, 2, d), d, false));
  CHECK(dg.passed());
  CHECK(dg.accuracy_order_found == 3);
}

TEST_CASE("verify_sbp: injected fault is named") {
  auto op = fd_periodic_d1(16, {0.0, 1.0}, 4);
  op.D1(3, 5) += 1e-3 * max_abs(op.D1);
  const auto r = verify_sbp(op);
  CHECK_FALSE(r.passed());
  CHECK(r.failures().find("sbp_identity") != std::string::npos);
}

TEST_CASE("verify_sbp: every family") {
  const Domain unit{0.0, 1.0};
  std::vector<VerificationReport> reports;
  for (int order : {2, 4, 6, 8}) {
    reports.push_back(verify_sbp(fd_periodic_d1(32, unit, order)));
    reports.push_back(verify_sbp(fd_periodic_d2(32, unit, order, StencilKind::narrow)));
    reports.push_back(verify_sbp(fd_periodic_d2(32, unit, order, StencilKind::wide)));
    reports.push_back(verify_sbp(square_d2(fd_periodic_d2(32, unit, order, StencilKind::narrow))));
  }
  for (int p = 1; p <= 6; ++p) {
    for (bool periodic : {false, true}) {
      const auto elems = uniform_elements(p, 6, unit);
      const auto cg = couple_cg(elems, unit, periodic);
      reports.push_back(verify_sbp(cg));
      reports.push_back(verify_sbp(couple_dg(elems, unit, periodic)));
      reports.push_back(verify_sbp(couple_dg_upwind(elems, unit, periodic)));
      reports.push_back(verify_sbp(couple_cg_upwind(elems, unit, periodic)));
      const auto narrow = couple_cg_d2(elems, unit, periodic);
      reports.push_back(verify_sbp(narrow));
      reports.push_back(verify_sbp(square_d1(cg)));
      reports.push_back(verify_sbp(compose_upwind(couple_dg_upwind(elems, unit, periodic),
                                                  UpwindComposition::plus_minus)));
      const auto compat = verify_compatibility(cg, narrow);
      CHECK_MESSAGE(compat.passed, "compatibility p=", p, " residual ", compat.residual);
    }
  }
  reports.push_back(verify_sbp(fourier_d2(32, unit, StencilKind::narrow)));
  reports.push_back(verify_sbp(square_d2(fourier_d2(32, unit, StencilKind::wide))));
  for (const auto& r : reports) {
    CHECK_MESSAGE(r.passed(), r.operator_name, ": ", r.failures());
    CHECK(r.max_residual() <= 1e-11);
  }
}

TEST_CASE("operator dump round trip") {
  const auto op = fd_periodic_d1(8, {0.0, 1.0}, 4);
  std::stringstream ss;
  write_matrix_csv(ss, op.D1);
  const Matrix back = read_matrix_csv(ss);
  CHECK(back == op.D1);
  CHECK(format_double(0.1) == "0.10000000000000001");
}
