#pragma once

#include "sbpwave/equations.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sbpwave {

/// Explicit Runge-Kutta method; b_hat holds embedded weights when present.
struct ButcherTableau {
  std::string name;
  Matrix A;
  Vector b;
  Vector c;
  int order = 0;
  std::optional<Vector> b_hat;
  int embedded_order = 0;

  Index stages() const { return b.size(); }
  bool is_explicit() const;
  /// Throws ConfigurationError unless explicit, consistent (c = A 1) and sum(b) = 1.
  void validate() const;
};

ButcherTableau rk4();
/// Dormand-Prince 5(4).
ButcherTableau dp5();
/// Butcher's seven-stage sixth-order method.
ButcherTableau butcher6();
/// "rk4", "dp5", "butcher6".
ButcherTableau tableau_from_string(const std::string& name);

/// du = f(t, u).
using RhsFunction = std::function<void(double, const Vector&, Vector&)>;
using Functional = std::function<double(const Vector&)>;

/// Wraps a semidiscretization (time-independent).
RhsFunction as_rhs(const SemidiscretizationPtr& sd);

struct RkStep {
  /// u + dt d.
  Vector state;
  /// d = sum b_i f_i.
  Vector direction;
  /// dt sum (b_i - b_hat_i) f_i; empty without embedded weights.
  Vector error_estimate;
};

RkStep rk_step(const ButcherTableau& tableau, const RhsFunction& f, const Vector& u, double t,
               double dt);

struct RelaxationConfig {
  /// Name of the invariant made exact by relaxation.
  std::string invariant = "J2";
  /// Initial bracket [1 - w, 1 + w].
  double half_width = 0.5;
  /// Accept when |J(new) - J(old)| <= tolerance * max(1, |J(old)|).
  double tolerance = 1e-14;
  int max_iterations = 200;
  /// Geometric bracket expansions before signalling StepFailure.
  int max_expansions = 5;

  void validate() const;
};

/// Root of g(gamma) = J(u + gamma dt d) - J(u) near 1; throws StepFailure without a bracket.
double solve_gamma(const Functional& J, const Vector& u, const Vector& d, double dt,
                   const RelaxationConfig& config = {});
/// Closed-form root -b/a of a quadratic g(gamma) = a gamma^2 + b gamma (quadratic J only).
std::optional<double> quadratic_gamma(const Functional& J, const Vector& u, const Vector& d, double dt);

struct StepResult {
  Vector state;
  double gamma = 1.0;
  /// gamma * dt.
  double dt_effective = 0.0;
  Vector direction;
  /// J(new) - J(old) for the relaxed functional.
  double residual = 0.0;
};

StepResult relaxation_step(const ButcherTableau& tableau, const RhsFunction& f, const Vector& u,
                           double t, double dt, const Functional& J,
                           const RelaxationConfig& config = {});

struct StepPolicy {
  enum class Kind { fixed, adaptive };
  Kind kind = Kind::fixed;
  /// Fixed step, or the initial step for adaptive runs.
  double dt = 1e-2;
  double abstol = 1e-8;
  double reltol = 1e-8;
  double dt_min = 1e-14;
  long max_steps = 10'000'000;
};

struct IntegrateOptions {
  ButcherTableau tableau = rk4();
  StepPolicy policy;
  bool relaxation = false;
  RelaxationConfig relax;
  /// Invariants evaluated at each record; the relaxed one is looked up by relax.invariant.
  std::vector<Invariant> invariants;
  /// Record every k accepted steps (and always the initial and final states).
  int record_every = 1;
  bool keep_states = false;
  /// Retries with halved dt after a StepFailure.
  int max_retries = 10;
};

struct Record {
  double t = 0.0;
  double gamma = 1.0;
  std::vector<double> invariants;
};

struct Trajectory {
  std::vector<Record> records;
  std::vector<Vector> states;
  Vector final_state;
  double t_final = 0.0;
  long steps = 0;
  long rejected = 0;
  long failures = 0;
  /// The clamped final step ran without relaxation.
  bool final_step_fallback = false;
  std::vector<std::string> log;
  std::vector<std::string> invariant_names;
};

using Recorder = std::function<void(double t, const Vector& u, double gamma)>;

Trajectory integrate(const RhsFunction& f, const Vector& u0, double t0, double t1,
                     const IntegrateOptions& options, const Recorder& recorder = {});

}  // namespace sbpwave
