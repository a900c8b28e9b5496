#include "sbpwave/solitary.hpp"
#include "test_support.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

using namespace sbpwave;

namespace {

using ld = long double;
using Fn = std::function<ld(ld, ld)>;

const ld PI = 3.141592653589793238462643383279502884L;

// n-th x-derivative by central differences with two Richardson levels.
ld dx_n(const Fn& f, ld t, ld x, int n) {
  if (n == 0) return f(t, x);
  auto central = [&](ld h) {
    ld s = 0.0L, binom = 1.0L;
    for (int j = 0; j <= n; ++j) {
      s += ((j % 2) ? -binom : binom) * f(t, x + (0.5L * n - j) * h);
      binom = binom * (n - j) / (j + 1);
    }
    return s / std::pow(h, static_cast<ld>(n));
  };
  const ld h = 0.02L;
  const ld a = central(h), b = central(h / 2), c = central(h / 4);
  const ld ab = (4 * b - a) / 3, bc = (4 * c - b) / 3;
  return (16 * bc - ab) / 15;
}

Fn dx(const Fn& f, int n) {
  return [f, n](ld t, ld x) { return dx_n(f, t, x, n); };
}

Fn dt(const Fn& f) {
  return [f](ld t, ld x) { return dx_n([&](ld s, ld y) { return f(y, s); }, x, t, 1); };
}

Fn u_exact() {
  return [](ld t, ld x) { return std::exp(t / 2) * std::sin(2 * PI * (x - t / 2)); };
}

Fn eta_exact() {
  return [](ld t, ld x) { return std::exp(t) * std::cos(2 * PI * (x - 2 * t)); };
}

// Strong-form residual of each equation, assembled from finite differences.
struct Residual {
  ld value;
  ld scale;
};

Residual scalar_residual(Equation e, ld t, ld x) {
  const Fn u = u_exact();
  const Fn w = [u](ld s, ld y) { return u(s, y) - dx_n(u, s, y, 2); };
  const ld v = u(t, x), v1 = dx_n(u, t, x, 1), v2 = dx_n(u, t, x, 2), v3 = dx_n(u, t, x, 3);
  const ld et = dt(w)(t, x);
  switch (e) {
    case Equation::bbm: return {et + v * v1 + v1, std::abs(et) + 1};
    case Equation::fw: return {et + v * v1 - 3 * v1 * v2 - v * v3 + v1, std::abs(et) + std::abs(v * v3) + 1};
    case Equation::ch: return {et + 3 * v * v1 - 2 * v1 * v2 - v * v3, std::abs(et) + std::abs(v * v3) + 1};
    case Equation::dp: return {et + 4 * v * v1 - 3 * v1 * v2 - v * v3, std::abs(et) + std::abs(v * v3) + 1};
    case Equation::hh: {
      const Fn lu = [u](ld s, ld y) { return 4 * u(s, y) - 5 * dx_n(u, s, y, 2) + dx_n(u, s, y, 4); };
      const Fn elt = [lu](ld s, ld y) { return lu(s, y); };
      const Fn ulu = [u, lu](ld s, ld y) { return u(s, y) * lu(s, y); };
      const ld ut_part = dt(elt)(t, x);
      const ld flux = dx(ulu, 1)(t, x) + v1 * lu(t, x);
      return {ut_part + flux, std::abs(ut_part) + std::abs(flux) + 1};
    }
    default: break;
  }
  return {0, 1};
}

}  // namespace

TEST_CASE("bbm_solitary parameters") {
  const auto w = bbm_solitary(1.2, {-90.0, 90.0}, 256);
  CHECK(w.amplitude == doctest::Approx(0.6));
  CHECK(w.width == doctest::Approx(0.5 * std::sqrt(1.0 - 1.0 / 1.2)));
  CHECK(w.width == doctest::Approx(0.20412).epsilon(1e-4));
  CHECK(w.profile.maxCoeff() == doctest::Approx(0.6));
  CHECK(bbm_solitary(1.0 + 1e-9, {-90.0, 90.0}, 16).amplitude < 1e-8);
  CHECK_THROWS_AS(bbm_solitary(1.0, {-90.0, 90.0}), ConfigurationError);
  // translation
  const Vector x{{10.0 * 1.2}};
  CHECK(w.evaluate(x, 10.0)(0) == doctest::Approx(0.6));
}

TEST_CASE("trigonometric resampling is exact for trigonometric polynomials") {
  const Domain d{-1.0, 3.0};
  const auto g = periodic_grid(32, d);
  auto f = [](const Vector& x) {
    const double w = 2.0 * std::numbers::pi / 4.0;
    return (1.0 + (3 * w * x.array()).sin() + 0.5 * (7 * w * x.array()).cos()).matrix().eval();
  };
  const Vector x = Vector::LinSpaced(17, -0.9, 2.7);
  CHECK(testing::max_diff(trigonometric_resample(f(g.nodes), d, x), f(x)) < 1e-13);
  CHECK_THROWS_AS(trigonometric_resample(Vector(), d, x), ConfigurationError);
}

TEST_CASE("Petviashvili reproduces the analytic BBM wave") {
  auto cfg = default_petviashvili_config(Equation::bbm);
  cfg.n = 4096;
  const auto w = petviashvili(cfg);
  const auto a = bbm_solitary(1.2, cfg.domain, cfg.n);
  const double dx = cfg.domain.length() / cfg.n;
  CHECK(std::sqrt(dx) * (w.profile - a.profile).norm() <= 1e-8);
}

TEST_CASE("Petviashvili converges for every equation") {
  for (auto e : {Equation::bbm, Equation::fw, Equation::ch, Equation::dp, Equation::hh, Equation::bbm_bbm}) {
    INFO(to_string(e));
    const auto cfg = default_petviashvili_config(e);
    const auto w = petviashvili(cfg);
    CHECK(w.residual <= cfg.tolerance);
    CHECK(std::abs(w.stabilizer - 1.0) <= 1e-8);
    CHECK(w.warnings.empty());
    // even guess gives an even profile
    const Index n = cfg.n;
    for (int c = 0; c < w.components(); ++c) {
      const Vector p = w.profile.segment(c * n, n);
      double asym = 0.0;
      for (Index j = 1; j < n; ++j) asym = std::max(asym, std::abs(p(j) - p(n - j)));
      CHECK(asym <= 1e-10 * p.cwiseAbs().maxCoeff());
    }
  }
  auto bad = default_petviashvili_config(Equation::ch);
  bad.speed = 0.9;
  CHECK_THROWS_AS(petviashvili(bad), ConfigurationError);
  auto kap = default_petviashvili_config(Equation::bbm);
  kap.kappa = 0.1;
  CHECK_THROWS_AS(petviashvili(kap), ConfigurationError);
  auto stuck = default_petviashvili_config(Equation::hh);
  stuck.n = 4096;
  stuck.tolerance = 1e-14;
  stuck.stagnation_window = 50;
  CHECK_THROWS_AS(petviashvili(stuck), ConstructionError);
}

TEST_CASE("kappa transform") {
  const auto w = petviashvili(default_petviashvili_config(Equation::ch));
  CHECK(kappa_transform(w, 0.0).profile == w.profile);
  const auto v = kappa_transform(w, w.kappa);
  CHECK(v.kappa == 0.0);
  CHECK(v.speed == doctest::Approx(1.7));
  const double dx = w.domain.length() / w.nodes.size();
  CHECK(dx * (v.profile.sum() - w.profile.sum()) == doctest::Approx(0.5 * w.domain.length()));
  CHECK_THROWS_AS(kappa_transform(bbm_solitary(1.2, {-90.0, 90.0}, 64), 0.5), ConfigurationError);
}

TEST_CASE("transformed CH wave travels under the kappa = 0 semidiscretization") {
  const auto w = kappa_transform(petviashvili(default_petviashvili_config(Equation::ch)), 0.5);
  DiscretizationSpec s;
  s.family = Family::fourier;
  s.n = 512;
  s.domain = w.domain;
  const auto sd = make_ch(make_bundle(s), 0.5);
  const Vector x = sd->grid().nodes;
  IntegrateOptions opt;
  opt.policy.dt = 0.05;
  opt.relaxation = true;
  opt.invariants = sd->invariants().items;
  const double t1 = 5.0;
  const auto tr = integrate(as_rhs(sd), w.evaluate(x), 0.0, t1, opt);
  CHECK(sd->mass().norm(tr.final_state - w.evaluate(x, t1)) < 1e-4);
  const auto& r0 = tr.records.front().invariants;
  const auto& r1 = tr.records.back().invariants;
  CHECK(std::abs(r1[0] - r0[0]) <= 1e-11 * std::abs(r0[0]));
  CHECK(std::abs(r1[1] - r0[1]) <= 1e-11 * std::abs(r0[1]));
}

TEST_CASE("wave CSV export") {
  const auto w = bbm_solitary(1.2, {-1.0, 1.0}, 4);
  std::ostringstream os;
  write_wave_csv(os, w);
  CHECK(os.str().rfind("x,u\n-1,", 0) == 0);
  auto sys = petviashvili(default_petviashvili_config(Equation::bbm_bbm));
  std::ostringstream os2;
  write_wave_csv(os2, sys);
  CHECK(os2.str().rfind("x,eta,u\n", 0) == 0);
}

TEST_CASE("manufactured solutions at reference points") {
  const auto bbm = manufactured_case(Equation::bbm);
  CHECK(bbm.u(0.0, 0.0) == 0.0);
  const auto sys = manufactured_case(Equation::bbm_bbm);
  for (double x : {0.0, 0.1, 0.37}) {
    CHECK(sys.eta(0.0, x) == doctest::Approx(std::cos(2 * std::numbers::pi * x)));
    CHECK(sys.u(0.0, x) == doctest::Approx(std::sin(2 * std::numbers::pi * x)));
  }
  const auto refl = manufactured_case(Equation::bbm_bbm_reflecting, false);
  CHECK(refl.u(0.3, 0.0) == 0.0);
  CHECK(std::abs(refl.u(0.3, 1.0)) < 1e-15);
  CHECK_THROWS_AS(manufactured_case(Equation::bbm_bbm_reflecting, true), ConfigurationError);
  CHECK_THROWS_AS(manufactured_case(Equation::bbm, false), ConfigurationError);
  const Vector x{{0.1, 0.2}};
  CHECK(sys.state(x, 0.0).size() == 4);
  CHECK(sys.source(x, 0.0).size() == 4);
}

TEST_CASE("manufactured sources match finite differences of the exact solutions") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> tx(0.0, 1.0);
  for (auto e : {Equation::bbm, Equation::fw, Equation::ch, Equation::dp, Equation::hh}) {
    const auto mc = manufactured_case(e);
    for (int i = 0; i < 50; ++i) {
      const double t = tx(rng), x = tx(rng);
      const Residual r = scalar_residual(e, t, x);
      INFO(to_string(e) << " t=" << t << " x=" << x);
      CHECK(std::abs(static_cast<ld>(mc.source_u(t, x)) - r.value) <= 1e-6L * r.scale);
    }
  }
  // BBM-BBM periodic
  const auto mc = manufactured_case(Equation::bbm_bbm);
  const Fn u = u_exact(), eta = eta_exact();
  for (int i = 0; i < 50; ++i) {
    const ld t = tx(rng), x = tx(rng);
    const Fn we = [eta](ld s, ld y) { return eta(s, y) - dx_n(eta, s, y, 2); };
    const Fn wu = [u](ld s, ld y) { return u(s, y) - dx_n(u, s, y, 2); };
    const Fn flux = [u, eta](ld s, ld y) { return u(s, y) + eta(s, y) * u(s, y); };
    const Fn fu = [u, eta](ld s, ld y) { return eta(s, y) + 0.5L * u(s, y) * u(s, y); };
    const ld ge = dt(we)(t, x) + dx(flux, 1)(t, x);
    const ld gu = dt(wu)(t, x) + dx(fu, 1)(t, x);
    CHECK(std::abs(static_cast<ld>(mc.source_eta(double(t), double(x))) - ge) <= 1e-6L * (std::abs(ge) + 1));
    CHECK(std::abs(static_cast<ld>(mc.source_u(double(t), double(x))) - gu) <= 1e-6L * (std::abs(gu) + 1));
  }
  // BBM-BBM reflecting
  const auto rc = manufactured_case(Equation::bbm_bbm_reflecting, false);
  const Fn ru = [](ld t, ld x) { return std::exp(t) * x * std::sin(PI * x); };
  const Fn re = [](ld t, ld x) { return std::exp(2 * t) * std::cos(PI * x); };
  for (int i = 0; i < 50; ++i) {
    const ld t = tx(rng), x = tx(rng);
    const Fn we = [re](ld s, ld y) { return re(s, y) - dx_n(re, s, y, 2); };
    const Fn wu = [ru](ld s, ld y) { return ru(s, y) - dx_n(ru, s, y, 2); };
    const Fn flux = [ru, re](ld s, ld y) { return ru(s, y) + re(s, y) * ru(s, y); };
    const Fn fu = [ru, re](ld s, ld y) { return re(s, y) + 0.5L * ru(s, y) * ru(s, y); };
    const ld ge = dt(we)(t, x) + dx(flux, 1)(t, x);
    const ld gu = dt(wu)(t, x) + dx(fu, 1)(t, x);
    CHECK(std::abs(static_cast<ld>(rc.source_eta(double(t), double(x))) - ge) <= 1e-6L * (std::abs(ge) + 1));
    CHECK(std::abs(static_cast<ld>(rc.source_u(double(t), double(x))) - gu) <= 1e-6L * (std::abs(gu) + 1));
  }
}
