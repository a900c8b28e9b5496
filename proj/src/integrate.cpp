#include "sbpwave/timeint.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sbpwave {

namespace {

double error_norm(const Vector& err, const Vector& u, const Vector& v, const StepPolicy& p) {
  const Vector scale =
      (p.abstol + p.reltol * u.cwiseAbs().cwiseMax(v.cwiseAbs()).array()).matrix();
  return std::sqrt((err.array() / scale.array()).square().mean());
}

struct Integrator {
  const RhsFunction& f;
  const IntegrateOptions& opt;
  const Recorder& recorder;
  const Invariant* relaxed = nullptr;
  Trajectory traj;
  long gamma_mismatches = 0;

  void record(double t, const Vector& u, double gamma) {
    Record r;
    r.t = t;
    r.gamma = gamma;
    for (const auto& inv : opt.invariants) r.invariants.push_back(inv.value(u));
    traj.records.push_back(std::move(r));
    if (opt.keep_states) traj.states.push_back(u);
    if (recorder) recorder(t, u, gamma);
  }

  void cross_check(const Vector& u, const Vector& d, double dt, double gamma) {
    if (relaxed->kind != InvariantKind::quadratic) return;
    const auto q = quadratic_gamma(relaxed->value, u, d, dt);
    if (q && std::abs(*q - gamma) > 1e-8 * std::max(1.0, std::abs(gamma))) ++gamma_mismatches;
  }

  /// Last step: choose dt so that gamma(dt) dt = remaining.
  bool final_relaxed_step(const Vector& u, double t, double remaining, Vector& out, double& gamma) {
    double dt = remaining;
    for (int it = 0; it < 10; ++it) {
      StepResult s;
      try {
        s = relaxation_step(opt.tableau, f, u, t, dt, relaxed->value, opt.relax);
      } catch (const StepFailure&) {
        return false;
      }
      const double next = remaining / s.gamma;
      if (std::abs(s.dt_effective - remaining) <= 1e-14 * std::max(1.0, std::abs(t + remaining))) {
        out = std::move(s.state);
        gamma = s.gamma;
        return true;
      }
      dt = next;
    }
    return false;
  }

  void run(const Vector& u0, double t0, double t1) {
    if (!(t1 >= t0)) throw ConfigurationError("integrate: t_end precedes t_start");
    if (!(opt.policy.dt > 0.0)) throw ConfigurationError("integrate: dt must be positive");
    if (opt.record_every < 1) throw ConfigurationError("integrate: record_every must be >= 1");
    opt.tableau.validate();
    const bool adaptive = opt.policy.kind == StepPolicy::Kind::adaptive;
    if (adaptive && !opt.tableau.b_hat)
      throw ConfigurationError("integrate: adaptive stepping needs an embedded pair (" + opt.tableau.name + ")");
    if (opt.relaxation) {
      opt.relax.validate();
      for (const auto& inv : opt.invariants)
        if (inv.name == opt.relax.invariant) relaxed = &inv;
      if (!relaxed) throw ConfigurationError("integrate: relaxed invariant '" + opt.relax.invariant + "' is not among the recorded invariants");
    }
    for (const auto& inv : opt.invariants) traj.invariant_names.push_back(inv.name);

    Vector u = u0;
    double t = t0;
    double dt = opt.policy.dt;
    record(t, u, 1.0);
    long since_record = 0;
    int retries = 0;
    double last_gamma = 1.0;
    const double q = adaptive ? static_cast<double>(std::min(opt.tableau.order, opt.tableau.embedded_order)) + 1.0 : 1.0;
    const double end_tol = 1e-14 * std::max(1.0, std::abs(t1));

    while (t1 - t > end_tol) {
      if (traj.steps + traj.rejected >= opt.policy.max_steps) {
        std::ostringstream os;
        os << "integrate: step limit reached at t = " << t;
        throw StepFailure(os.str());
      }
      const double remaining = t1 - t;
      bool last = dt >= remaining * (1.0 - 1e-12);
      double h = last ? remaining : dt;
      double err = 0.0;
      RkStep step = rk_step(opt.tableau, f, u, t, h);
      if (!step.state.allFinite()) err = 1e300;
      if (adaptive) err = std::max(err, error_norm(step.error_estimate, u, step.state, opt.policy));
      if (adaptive && err > 1.0) {
        ++traj.rejected;
        dt = h * std::max(0.2, 0.9 * std::pow(err, -1.0 / q));
        if (dt < opt.policy.dt_min) throw StepFailure("integrate: step size underflow");
        continue;
      }
      if (!adaptive && !step.state.allFinite()) throw StepFailure("integrate: non-finite state");

      double gamma = 1.0;
      Vector next;
      double advance = h;
      if (opt.relaxation) {
        bool ok = true;
        try {
          gamma = solve_gamma(relaxed->value, u, step.direction, h, opt.relax);
          cross_check(u, step.direction, h, gamma);
        } catch (const StepFailure& e) {
          ok = false;
          if (!last) {
            ++traj.failures;
            if (++retries > opt.max_retries) throw;
            dt = h * 0.5;
            if (dt < opt.policy.dt_min) throw StepFailure(std::string(e.what()) + "; step size underflow");
            continue;
          }
        }
        if (ok && t + gamma * h >= t1 - end_tol) last = true;
        if (last) {
          if (final_relaxed_step(u, t, remaining, next, gamma)) {
            advance = remaining;
          } else {
            traj.final_step_fallback = true;
            traj.log.push_back("final step to t = " + std::to_string(t1) + " taken without relaxation");
            next = rk_step(opt.tableau, f, u, t, remaining).state;
            gamma = 1.0;
            advance = remaining;
          }
        } else {
          next = u + (gamma * h) * step.direction;
          advance = gamma * h;
        }
      } else {
        next = std::move(step.state);
      }
      u = std::move(next);
      t = last ? t1 : t + advance;
      ++traj.steps;
      retries = 0;
      last_gamma = gamma;
      if (adaptive) dt = h * std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -1.0 / q)));
      if (last) break;
      if (++since_record >= opt.record_every) {
        record(t, u, gamma);
        since_record = 0;
      }
    }
    if (traj.steps > 0) t = t1;
    if (traj.records.back().t != t) record(t, u, last_gamma);
    if (gamma_mismatches > 0)
      traj.log.push_back(std::to_string(gamma_mismatches) +
                         " steps where the closed-form quadratic root disagreed with the bracketed root");
    traj.final_state = std::move(u);
    traj.t_final = t;
  }
};

}  // namespace

Trajectory integrate(const RhsFunction& f, const Vector& u0, double t0, double t1,
                     const IntegrateOptions& options, const Recorder& recorder) {
  Integrator it{f, options, recorder, nullptr, {}, 0};
  it.run(u0, t0, t1);
  return std::move(it.traj);
}

}  // namespace sbpwave
