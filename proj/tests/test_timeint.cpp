#include "sbpwave/timeint.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace sbpwave;

namespace {

// Rooted trees as sorted child-index lists into a global table.
struct Trees {
  std::vector<std::vector<int>> children;
  std::vector<int> order;

  explicit Trees(int max_order) {
    children.push_back({});
    order.push_back(1);
    for (int n = 2; n <= max_order; ++n) {
      const int known = static_cast<int>(children.size());
      std::vector<int> current;
      extend(n - 1, 0, known, current);
    }
  }

  void extend(int remaining, int min_index, int known, std::vector<int>& current) {
    if (remaining == 0) {
      int n = 1;
      for (int c : current) n += order[c];
      children.push_back(current);
      order.push_back(n);
      return;
    }
    for (int i = min_index; i < known; ++i) {
      if (order[i] > remaining) continue;
      current.push_back(i);
      extend(remaining - order[i], i, known, current);
      current.pop_back();
    }
  }

  double density(int t) const {
    double g = order[t];
    for (int c : children[t]) g *= density(c);
    return g;
  }

  Vector stage_weights(int t, const Matrix& a) const {
    Vector v = Vector::Ones(a.rows());
    for (int c : children[t]) v = v.cwiseProduct(a * stage_weights(c, a));
    return v;
  }

  /// Largest |b^T Psi(t) - 1/gamma(t)| over trees of the given order.
  double defect(const Matrix& a, const Vector& b, int n) const {
    double worst = 0.0;
    for (size_t t = 0; t < children.size(); ++t)
      if (order[t] == n)
        worst = std::max(worst, std::abs(b.dot(stage_weights(static_cast<int>(t), a)) - 1.0 / density(static_cast<int>(t))));
    return worst;
  }
};

const Trees trees(6);

Functional half_norm2() {
  return [](const Vector& u) { return 0.5 * u.squaredNorm(); };
}

RhsFunction linear(double lambda) {
  return [lambda](double, const Vector& u, Vector& du) { du = lambda * u; };
}

// Pendulum q' = p, p' = -sin q with energy p^2/2 - cos q.
RhsFunction pendulum() {
  return [](double, const Vector& u, Vector& du) {
    du.resize(2);
    du << u(1), -std::sin(u(0));
  };
}

Invariant pendulum_energy() {
  Invariant inv;
  inv.name = "H";
  inv.kind = InvariantKind::cubic;
  inv.conserved = true;
  inv.value = [](const Vector& u) { return 0.5 * u(1) * u(1) - std::cos(u(0)); };
  inv.gradient = [](const Vector& u) -> Vector { return Vector{{std::sin(u(0)), u(1)}}; };
  return inv;
}

}  // namespace

TEST_CASE("rooted tree table has the standard counts") {
  std::vector<int> count(7, 0);
  for (int o : trees.order) ++count[o];
  CHECK(count[1] == 1);
  CHECK(count[2] == 1);
  CHECK(count[3] == 2);
  CHECK(count[4] == 4);
  CHECK(count[5] == 9);
  CHECK(count[6] == 20);
  CHECK(trees.order.size() == 37);
}

TEST_CASE("tableaus satisfy their order conditions") {
  for (const auto& t : {rk4(), dp5(), butcher6()}) {
    INFO(t.name);
    t.validate();
    for (int n = 1; n <= t.order; ++n) CHECK(trees.defect(t.A, t.b, n) < 1e-14);
    if (t.order < 6) CHECK(trees.defect(t.A, t.b, t.order + 1) > 1e-6);
  }
  const auto d = dp5();
  REQUIRE(d.b_hat);
  for (int n = 1; n <= d.embedded_order; ++n) CHECK(trees.defect(d.A, *d.b_hat, n) < 1e-14);
  CHECK(trees.defect(d.A, *d.b_hat, 5) > 1e-6);
  CHECK(tableau_from_string("butcher6").order == 6);
  CHECK_THROWS_AS(tableau_from_string("tsit5"), ConfigurationError);
  auto bad = rk4();
  bad.A(0, 1) = 0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigurationError);
  CHECK_THROWS_AS(rk_step(bad, linear(1.0), Vector::Ones(1), 0.0, 0.1), ConfigurationError);
}

TEST_CASE("rk_step examples") {
  const Vector u = Vector::Ones(1);
  const auto s = rk_step(rk4(), linear(1.0), u, 0.0, 0.1);
  CHECK(s.state(0) == doctest::Approx(1.0 + 0.1 + 0.01 / 2 + 0.001 / 6 + 0.0001 / 24).epsilon(1e-15));
  const auto z = rk_step(rk4(), linear(0.0), Vector{{1.0, 2.0}}, 0.0, 0.3);
  CHECK(z.state == Vector{{1.0, 2.0}});
  CHECK(z.direction.isZero());
  // stage combination of a mass-free rhs stays mass-free
  const Matrix l{{1.0, -1.0}, {-1.0, 1.0}};
  RhsFunction f = [&](double, const Vector& v, Vector& dv) { dv = l * v; };
  const auto m = rk_step(dp5(), f, Vector{{0.3, -0.7}}, 0.0, 0.2);
  CHECK(std::abs(m.direction.sum()) < 1e-15);
  CHECK(m.error_estimate.size() == 2);
}

TEST_CASE("solve_gamma examples") {
  const auto J = half_norm2();
  CHECK(solve_gamma(J, Vector{{1.0, 0.0}}, Vector::Zero(2), 1.0) == 1.0);
  CHECK(solve_gamma(J, Vector{{1.0, 0.0}}, Vector{{-1.0, 1.0}}, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(solve_gamma(J, Vector{{2.0, 0.0}}, Vector{{-1.0, 0.5}}, 1.0) == doctest::Approx(3.2).epsilon(1e-14));
  CHECK(*quadratic_gamma(J, Vector{{2.0, 0.0}}, Vector{{-1.0, 0.5}}, 1.0) == doctest::Approx(3.2).epsilon(1e-14));
  // d orthogonal to u: J grows for every gamma != 0
  CHECK_THROWS_AS(solve_gamma(J, Vector{{1.0, 0.0}}, Vector{{0.0, 1.0}}, 1.0), StepFailure);
  RelaxationConfig bad;
  bad.half_width = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigurationError);
}

TEST_CASE("relaxation keeps the BBM energy on a solitary wave") {
  DiscretizationSpec s;
  s.family = Family::fourier;
  s.n = 64;
  s.domain = {-90.0, 90.0};
  const auto sd = make_bbm(make_bundle(s));
  const double c = 1.2;
  const double a = 3.0 * (c - 1.0), k = 0.5 * std::sqrt(1.0 - 1.0 / c);
  const Vector u = (a / (k * sd->grid().nodes.array()).cosh().square()).matrix();
  const auto& j2 = sd->invariants().get("J2");
  const auto r = relaxation_step(rk4(), as_rhs(sd), u, 0.0, 0.5, j2.value);
  CHECK(std::abs(r.residual) <= 1e-13 * std::abs(j2.value(u)));
  CHECK(r.dt_effective == doctest::Approx(0.5 * r.gamma));
  const auto z = relaxation_step(rk4(), linear(0.0), u, 0.0, 0.5, j2.value);
  CHECK(z.gamma == 1.0);
  CHECK(z.state == u);
}

TEST_CASE("gamma - 1 decays like dt^3 for RK4") {
  // rigid body rotation, |u|^2 / 2 conserved
  RhsFunction f = [](double, const Vector& u, Vector& du) {
    du.resize(3);
    du << (1.0 / 3 - 0.5) * u(1) * u(2), (1.0 - 1.0 / 3) * u(2) * u(0), (0.5 - 1.0) * u(0) * u(1);
  };
  const Vector u{{0.8, 0.6, 0.3}};
  std::vector<double> dts{0.4, 0.2, 0.1, 0.05}, dev;
  for (double dt : dts) dev.push_back(std::abs(relaxation_step(rk4(), f, u, 0.0, dt, half_norm2()).gamma - 1.0));
  const double slope = std::log(dev.front() / dev.back()) / std::log(dts.front() / dts.back());
  CHECK(slope == doctest::Approx(3.0).epsilon(0.4 / 3.0));
}

TEST_CASE("gamma - 1 on the BBM solitary wave is at least third order") {
  DiscretizationSpec s;
  s.family = Family::fourier;
  s.n = 64;
  s.domain = {-90.0, 90.0};
  const auto sd = make_bbm(make_bundle(s));
  const double c = 1.2;
  const double a = 3.0 * (c - 1.0), k = 0.5 * std::sqrt(1.0 - 1.0 / c);
  const Vector u = (a / (k * sd->grid().nodes.array()).cosh().square()).matrix();
  const auto& j2 = sd->invariants().get("J2");
  std::vector<double> dts{0.4, 0.2, 0.1, 0.05}, dev;
  for (double dt : dts) dev.push_back(std::abs(relaxation_step(rk4(), as_rhs(sd), u, 0.0, dt, j2.value).gamma - 1.0));
  const double slope = std::log(dev.front() / dev.back()) / std::log(dts.front() / dts.back());
  CHECK(slope >= 2.6);
}

TEST_CASE("integrate with zero rhs keeps the state") {
  IntegrateOptions opt;
  opt.policy.dt = 0.1;
  const Vector u0{{1.0, -2.0}};
  const auto tr = integrate(linear(0.0), u0, 0.0, 1.0, opt);
  CHECK(tr.final_state == u0);
  CHECK(tr.t_final == 1.0);
  CHECK(tr.records.front().t == 0.0);
  CHECK(tr.records.back().t == 1.0);
  CHECK(tr.steps == 10);
  const auto empty = integrate(linear(1.0), u0, 0.5, 0.5, opt);
  CHECK(empty.steps == 0);
  CHECK(empty.final_state == u0);
  CHECK(empty.records.size() == 1);
  CHECK_THROWS_AS(integrate(linear(1.0), u0, 1.0, 0.0, opt), ConfigurationError);
  opt.policy.kind = StepPolicy::Kind::adaptive;
  CHECK_THROWS_AS(integrate(linear(1.0), u0, 0.0, 1.0, opt), ConfigurationError);
}

TEST_CASE("adaptive dp5 meets its tolerance") {
  IntegrateOptions opt;
  opt.tableau = dp5();
  opt.policy.kind = StepPolicy::Kind::adaptive;
  opt.policy.abstol = opt.policy.reltol = 1e-10;
  opt.policy.dt = 1e-3;
  const auto tr = integrate(linear(-1.0), Vector::Ones(1), 0.0, 2.0, opt);
  CHECK(tr.t_final == 2.0);
  CHECK(tr.final_state(0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-8));
  CHECK(tr.steps < 200);
  // time-dependent rhs: u' = cos t
  RhsFunction f = [](double t, const Vector&, Vector& du) { du = Vector::Constant(1, std::cos(t)); };
  const auto tt = integrate(f, Vector::Zero(1), 0.0, 3.0, opt);
  CHECK(tt.final_state(0) == doctest::Approx(std::sin(3.0)).epsilon(1e-8));
}

TEST_CASE("relaxed integration conserves energy and hits t_end") {
  IntegrateOptions opt;
  opt.policy.dt = 0.1;
  opt.relaxation = true;
  opt.relax.invariant = "H";
  opt.invariants = {pendulum_energy()};
  opt.record_every = 5;
  const Vector u0{{1.0, 0.0}};
  const auto tr = integrate(pendulum(), u0, 0.0, 10.0, opt);
  CHECK(tr.t_final == 10.0);
  CHECK_FALSE(tr.final_step_fallback);
  const double h0 = tr.records.front().invariants[0];
  for (const auto& r : tr.records) CHECK(std::abs(r.invariants[0] - h0) <= 1e-14 * 4);
  CHECK(tr.records.size() >= 20);

  opt.relaxation = false;
  const auto plain = integrate(pendulum(), u0, 0.0, 10.0, opt);
  CHECK(std::abs(plain.records.back().invariants[0] - h0) > 1e-8);

  opt.relax.invariant = "missing";
  opt.relaxation = true;
  CHECK_THROWS_AS(integrate(pendulum(), u0, 0.0, 1.0, opt), ConfigurationError);
}

TEST_CASE("relaxation keeps the temporal order") {
  const Vector u0{{1.0, 0.0}};
  IntegrateOptions ref;
  ref.tableau = butcher6();
  ref.policy.dt = 1e-3;
  const Vector exact = integrate(pendulum(), u0, 0.0, 2.0, ref).final_state;
  for (const auto& tab : {rk4(), butcher6()}) {
    IntegrateOptions opt;
    opt.tableau = tab;
    opt.relaxation = true;
    opt.relax.invariant = "H";
    opt.invariants = {pendulum_energy()};
    std::vector<double> err;
    const std::vector<double> dts{0.2, 0.1};
    for (double dt : dts) {
      opt.policy.dt = dt;
      err.push_back((integrate(pendulum(), u0, 0.0, 2.0, opt).final_state - exact).norm());
    }
    const double eoc = std::log(err[0] / err[1]) / std::log(2.0);
    INFO(tab.name << " eoc " << eoc);
    CHECK(std::abs(eoc - tab.order) <= 0.3);
  }
}
