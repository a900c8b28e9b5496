#include "sbpwave/harness/experiments.hpp"

#include "sbpwave/harness/eoc.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace sbpwave::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

AssertionResult at_most(const std::string& name, double value, double bound) {
  return {name, value, bound, value <= bound};
}

AssertionResult at_least(const std::string& name, double value, double bound) {
  return {name, value, bound, value >= bound};
}

StepPolicy make_policy(const TimeSettings& t, double dx) {
  StepPolicy p;
  if (t.adaptive) {
    p.kind = StepPolicy::Kind::adaptive;
    p.dt = t.dt > 0.0 ? t.dt : 1e-3;
    p.abstol = t.abstol;
    p.reltol = t.reltol;
  } else {
    p.dt = t.dt > 0.0 ? t.dt : t.cfl * dx;
  }
  return p;
}

const InvariantSummary* find_summary(const std::vector<InvariantSummary>& s, const std::string& name) {
  for (const auto& x : s)
    if (x.name == name) return &x;
  return nullptr;
}

// EOC of each row against the previous one when both succeeded.
template <class Row>
void fill_eoc(std::vector<Row*>& rows) {
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i]->failed || rows[i - 1]->failed) continue;
    rows[i]->eoc = compute_eoc({rows[i - 1]->error, rows[i]->error},
                               {static_cast<double>(rows[i - 1]->n), static_cast<double>(rows[i]->n)})[0];
  }
}

}  // namespace

bool all_passed(const std::vector<AssertionResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

double relative_drift(double value, double initial) {
  const double d = value - initial;
  return initial == 0.0 ? d : d / std::abs(initial);
}

std::vector<InvariantSummary> summarize(const Trajectory& tr, const std::vector<Invariant>& invariants) {
  std::vector<InvariantSummary> out;
  if (tr.records.empty()) return out;
  const double t0 = tr.records.front().t;
  const double mid = 0.5 * (t0 + tr.records.back().t);
  for (size_t i = 0; i < invariants.size(); ++i) {
    InvariantSummary s;
    s.name = invariants[i].name;
    s.conserved = invariants[i].conserved;
    s.initial = tr.records.front().invariants[i];
    s.final = tr.records.back().invariants[i];
    for (const auto& r : tr.records) {
      const double d = std::abs(relative_drift(r.invariants[i], s.initial));
      s.max_drift = std::max(s.max_drift, d);
      if (r.t <= mid)
        s.first_half_max = std::max(s.first_half_max, d);
      else
        s.second_half_max = std::max(s.second_half_max, d);
    }
    out.push_back(s);
  }
  return out;
}

SemidiscretizationPtr build_semidiscretization(const ExperimentConfig& config, Index n) {
  DiscretizationSpec s = config.discretization;
  s.n = n;
  if (config.equation == Equation::bbm_bbm_reflecting) {
    s.periodic = false;
    return make_bbm_bbm_reflecting(make_bundle(s).D1);
  }
  return make_semidiscretization(config.equation, make_bundle(s), config.params);
}

double node_spacing(const SemidiscretizationPtr& sd) {
  return sd->grid().length() / static_cast<double>(sd->grid_size());
}

Vector random_smooth_state(const SemidiscretizationPtr& sd, double amplitude, int modes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const Grid& g = sd->grid();
  const Vector s = ((g.nodes.array() - g.x_min) / g.length()).matrix();
  const bool walls = sd->equation() == Equation::bbm_bbm_reflecting;
  const double base = walls ? std::numbers::pi : 2.0 * std::numbers::pi;
  auto series = [&](bool sine) {
    Vector v = Vector::Constant(s.size(), sine ? 0.0 : amplitude);
    for (int k = 1; k <= modes; ++k) {
      const double a = amplitude * dist(rng) / k;
      const double b = amplitude * dist(rng) / k;
      const Vector th = (base * k * s.array()).matrix();
      if (walls && sine)
        v += (a * th.array().sin()).matrix();
      else if (walls)
        v += (a * th.array().cos()).matrix();
      else
        v += (a * th.array().cos() + b * th.array().sin()).matrix();
    }
    return v;
  };
  if (components(sd->equation()) == 1) return series(false);
  const Vector eta = series(false);
  Vector u = series(true);
  if (walls) u(0) = u(u.size() - 1) = 0.0;
  return stack(eta, u);
}

TravelingWave traveling_wave_for(const ExperimentConfig& config) {
  const Equation e = config.equation;
  const Domain d = config.discretization.domain;
  if (e == Equation::bbm || e == Equation::bbm_dissipative) return bbm_solitary(config.initial.speed, d, 1024);
  const Equation pe = e == Equation::bbm_bbm_reflecting ? Equation::bbm_bbm : e;
  PetviashviliConfig pv = default_petviashvili_config(pe);
  pv.speed = config.initial.speed;
  pv.kappa = config.initial.kappa;
  pv.domain = d;
  if (config.solver.n > 0) pv.n = config.solver.n;
  if (config.solver.tolerance > 0.0) pv.tolerance = config.solver.tolerance;
  pv.max_iterations = config.solver.max_iterations;
  const TravelingWave w = petviashvili(pv);
  return kappa_transform(w, w.kappa);
}

// Convergence ------------------------------------------------------------------

ConvergenceResult run_convergence(const ExperimentConfig& config) {
  config.validate();
  ConvergenceResult result;
  result.config = config;
  const bool periodic = config.equation != Equation::bbm_bbm_reflecting && config.discretization.periodic;
  const ManufacturedCase mc = manufactured_case(config.equation, periodic);
  for (Index n : config.sizes) {
    ConvergenceRow row;
    row.n = n;
    const auto sd = build_semidiscretization(config, n);
    row.nodes = sd->grid_size();
    DiscretizationSpec spec = config.discretization;
    spec.n = n;
    row.dx = grid_spacing(spec);
    const Vector x = sd->grid().nodes;
    IntegrateOptions opt;
    opt.tableau = tableau_from_string(config.time.tableau);
    opt.policy = make_policy(config.time, node_spacing(sd));
    opt.invariants = sd->invariants().items;
    opt.record_every = config.record_every;
    const auto start = Clock::now();
    try {
      const Trajectory tr = integrate(manufactured_rhs(sd, mc), mc.state(x, 0.0), 0.0, config.time.t_end, opt);
      row.error = sd->norm(tr.final_state - mc.state(x, config.time.t_end));
      row.steps = tr.steps;
      row.rejected = tr.rejected;
      row.invariants = summarize(tr, opt.invariants);
      if (!std::isfinite(row.error)) {
        row.failed = true;
        row.message = "non-finite error";
      }
    } catch (const std::runtime_error& e) {
      row.failed = true;
      row.message = e.what();
    }
    row.wall_time = seconds_since(start);
    result.rows.push_back(row);
  }
  std::vector<ConvergenceRow*> ptrs;
  for (auto& r : result.rows) ptrs.push_back(&r);
  fill_eoc(ptrs);
  return result;
}

std::optional<double> ConvergenceResult::finest_eoc() const {
  if (rows.size() < 2) return std::nullopt;
  return rows.back().eoc;
}

CsvTable ConvergenceResult::table() const {
  std::vector<std::string> header{"equation", "family", "order", "stencil", "n",     "nodes",    "dx",
                                  "error",    "eoc",    "status", "steps",  "rejected", "wall_time_s"};
  std::vector<std::string> names;
  for (const auto& r : rows)
    if (!r.invariants.empty()) {
      for (const auto& s : r.invariants) names.push_back(s.name);
      break;
    }
  for (const auto& n : names)
    for (const char* suffix : {"_initial", "_final", "_max_drift"}) header.push_back(n + suffix);
  header.push_back("message");
  CsvTable t(header);
  const auto& d = config.discretization;
  for (const auto& r : rows) {
    std::vector<std::string> row{to_string(config.equation),
                                 to_string(d.family),
                                 cell(static_cast<long>(d.order)),
                                 to_string(d.stencil),
                                 cell(static_cast<long>(r.n)),
                                 cell(static_cast<long>(r.nodes)),
                                 cell(r.dx),
                                 r.failed ? std::string() : cell(r.error),
                                 cell(r.eoc),
                                 r.failed ? "failed" : "ok",
                                 cell(r.steps),
                                 cell(r.rejected),
                                 cell(r.wall_time)};
    for (const auto& n : names) {
      const auto* s = find_summary(r.invariants, n);
      row.push_back(s ? cell(s->initial) : std::string());
      row.push_back(s ? cell(s->final) : std::string());
      row.push_back(s ? cell(s->max_drift) : std::string());
    }
    row.push_back(sanitize(r.message));
    t.add_row(row);
  }
  return t;
}

std::vector<AssertionResult> ConvergenceResult::check() const {
  std::vector<AssertionResult> out;
  const auto& a = config.assertions;
  const double eoc = finest_eoc().value_or(std::numeric_limits<double>::quiet_NaN());
  if (a.eoc_min) out.push_back(at_least("finest EOC >= eoc_min", eoc, *a.eoc_min));
  if (a.eoc_max) out.push_back(at_most("finest EOC <= eoc_max", eoc, *a.eoc_max));
  return out;
}

// Conservation ---------------------------------------------------------------

namespace {

Vector initial_state(const ExperimentConfig& config, const SemidiscretizationPtr& sd) {
  const Vector& x = sd->grid().nodes;
  const auto& ic = config.initial;
  if (ic.kind == "zero") return Vector::Zero(sd->state_size());
  if (ic.kind == "random") return random_smooth_state(sd, ic.amplitude, ic.modes, config.seed);
  Vector u0 = traveling_wave_for(config).evaluate(x, 0.0);
  if (sd->equation() == Equation::bbm_bbm_reflecting) {
    const Index n = sd->grid_size();
    u0(n) = u0(2 * n - 1) = 0.0;
  }
  return u0;
}

ConservationRun conservation_run(const ExperimentConfig& config, const SemidiscretizationPtr& sd,
                                 const Vector& u0, const std::vector<Invariant>& invariants, double dt,
                                 bool relax) {
  ConservationRun run;
  run.relaxation = relax;
  IntegrateOptions opt;
  opt.tableau = tableau_from_string(config.time.tableau);
  opt.policy = make_policy(config.time, node_spacing(sd));
  opt.policy.dt = dt;
  opt.relaxation = relax;
  opt.relax.invariant = config.relaxation.invariant;
  opt.invariants = invariants;
  opt.record_every = config.record_every;
  const auto start = Clock::now();
  run.trajectory = integrate(as_rhs(sd), u0, 0.0, config.time.t_end, opt);
  run.wall_time = seconds_since(start);
  run.summary = summarize(run.trajectory, invariants);
  const auto& recs = run.trajectory.records;
  if (recs.size() > 1) run.gamma_min = run.gamma_max = recs[1].gamma;
  for (size_t i = 1; i < recs.size(); ++i) {
    run.gamma_min = std::min(run.gamma_min, run.trajectory.records[i].gamma);
    run.gamma_max = std::max(run.gamma_max, run.trajectory.records[i].gamma);
  }
  return run;
}

}  // namespace

ConservationResult run_conservation(const ExperimentConfig& config) {
  config.validate();
  ConservationResult result;
  result.config = config;
  const auto sd = build_semidiscretization(config, config.sizes.front());
  result.invariants = sd->invariants().items;
  result.nodes = sd->grid_size();
  const auto& set = sd->invariants();
  if (!set.contains(config.relaxation.invariant))
    throw ConfigurationError("conservation: unknown invariant '" + config.relaxation.invariant + "'");
  if (!set.get(config.relaxation.invariant).conserved && !config.expect_nonconservative)
    throw ConfigurationError("conservation: " + config.relaxation.invariant + " is not conserved by " +
                             to_string(config.equation) + " with these operators; set expect_nonconservative");
  const Vector u0 = initial_state(config, sd);
  result.dt = make_policy(config.time, node_spacing(sd)).dt;
  result.relaxed = conservation_run(config, sd, u0, result.invariants, result.dt, true);
  result.unrelaxed = conservation_run(config, sd, u0, result.invariants, result.dt, false);
  return result;
}

CsvTable ConservationResult::series() const {
  std::vector<std::string> header{"relaxation", "t", "gamma"};
  for (const auto& inv : invariants) header.push_back(inv.name);
  for (const auto& inv : invariants) header.push_back(inv.name + "_drift");
  CsvTable t(header);
  for (const ConservationRun* run : {&relaxed, &unrelaxed}) {
    const auto& recs = run->trajectory.records;
    for (const auto& r : recs) {
      std::vector<std::string> row{run->relaxation ? "on" : "off", cell(r.t), cell(r.gamma)};
      for (double v : r.invariants) row.push_back(cell(v));
      for (size_t i = 0; i < r.invariants.size(); ++i)
        row.push_back(cell(relative_drift(r.invariants[i], recs.front().invariants[i])));
      t.add_row(row);
    }
  }
  return t;
}

CsvTable ConservationResult::summary() const {
  CsvTable t({"relaxation", "invariant", "conserved", "initial", "final", "max_drift", "first_half_max",
              "second_half_max", "gamma_min", "gamma_max", "steps", "wall_time_s"});
  for (const ConservationRun* run : {&relaxed, &unrelaxed})
    for (const auto& s : run->summary)
      t.add_row({run->relaxation ? "on" : "off", s.name, s.conserved ? "yes" : "no", cell(s.initial),
                 cell(s.final), cell(s.max_drift), cell(s.first_half_max), cell(s.second_half_max),
                 cell(run->gamma_min), cell(run->gamma_max), cell(run->trajectory.steps), cell(run->wall_time)});
  return t;
}

std::vector<AssertionResult> ConservationResult::check() const {
  std::vector<AssertionResult> out;
  const auto& a = config.assertions;
  if (a.drift_max)
    for (const auto& s : relaxed.summary)
      if (s.conserved) out.push_back(at_most(s.name + " drift with relaxation", s.max_drift, *a.drift_max));
  const std::string& rj = config.relaxation.invariant;
  if (a.unrelaxed_ratio_min) {
    const auto* on = find_summary(relaxed.summary, rj);
    const auto* off = find_summary(unrelaxed.summary, rj);
    const double ratio = off->max_drift / std::max(on->max_drift, std::numeric_limits<double>::min());
    out.push_back(at_least(rj + " drift ratio off/on", ratio, *a.unrelaxed_ratio_min));
  }
  if (a.half_ratio_max) {
    const auto* s = find_summary(relaxed.summary, a.half_ratio_invariant);
    if (!s) throw ConfigurationError("conservation: unknown invariant '" + a.half_ratio_invariant + "'");
    const double ratio = s->first_half_max > 0.0 ? s->second_half_max / s->first_half_max
                                                 : (s->second_half_max > 0.0 ? INFINITY : 0.0);
    out.push_back(at_most(a.half_ratio_invariant + " second/first half drift", ratio, *a.half_ratio_max));
  }
  return out;
}

// Long-time ------------------------------------------------------------------

LongtimeResult run_longtime(const ExperimentConfig& config) {
  config.validate();
  LongtimeResult result;
  result.config = config;
  const TravelingWave wave = traveling_wave_for(config);
  result.t_end = config.periods * config.discretization.domain.length() / wave.speed;
  std::vector<LongtimeRow*> by_variant[2];
  result.rows.reserve(2 * config.sizes.size());
  for (Index n : config.sizes) {
    for (int v = 0; v < 2; ++v) {
      const bool conservative = v == 1;
      ExperimentConfig c = config;
      c.discretization.stencil = conservative ? StencilKind::wide : StencilKind::narrow;
      LongtimeRow row;
      row.variant = conservative ? "conservative" : "standard";
      row.n = n;
      const auto sd = build_semidiscretization(c, n);
      row.nodes = sd->grid_size();
      DiscretizationSpec spec = c.discretization;
      spec.n = n;
      row.dx = grid_spacing(spec);
      const Vector& x = sd->grid().nodes;
      IntegrateOptions opt;
      opt.tableau = tableau_from_string(config.time.tableau);
      opt.policy = make_policy(config.time, node_spacing(sd));
      row.dt = opt.policy.dt;
      opt.relaxation = conservative && config.relaxation.enabled;
      opt.relax.invariant = config.relaxation.invariant;
      opt.invariants = sd->invariants().items;
      opt.record_every = config.record_every;
      const auto start = Clock::now();
      try {
        const Trajectory tr = integrate(as_rhs(sd), wave.evaluate(x, 0.0), 0.0, result.t_end, opt);
        row.error = sd->norm(tr.final_state - wave.evaluate(x, result.t_end));
        row.steps = tr.steps;
        row.invariants = summarize(tr, opt.invariants);
        if (!std::isfinite(row.error)) {
          row.failed = true;
          row.message = "non-finite error";
        }
      } catch (const std::runtime_error& e) {
        row.failed = true;
        row.message = e.what();
      }
      row.wall_time = seconds_since(start);
      result.rows.push_back(row);
      by_variant[v].push_back(&result.rows.back());
    }
  }
  fill_eoc(by_variant[0]);
  fill_eoc(by_variant[1]);
  return result;
}

bool LongtimeResult::conservative_better() const {
  for (size_t i = 0; i + 1 < rows.size(); i += 2) {
    const auto& s = rows[i];
    const auto& c = rows[i + 1];
    if (!s.failed && !c.failed && c.error < s.error) return true;
  }
  return false;
}

CsvTable LongtimeResult::table() const {
  std::vector<std::string> header{"variant", "n", "nodes", "dx", "dt", "t_end", "error", "eoc", "status", "steps",
                                  "wall_time_s"};
  std::vector<std::string> names;
  for (const auto& r : rows)
    if (!r.invariants.empty()) {
      for (const auto& s : r.invariants) names.push_back(s.name);
      break;
    }
  for (const auto& n : names) header.push_back(n + "_max_drift");
  header.push_back("message");
  CsvTable t(header);
  for (const auto& r : rows) {
    std::vector<std::string> row{r.variant,
                                 cell(static_cast<long>(r.n)),
                                 cell(static_cast<long>(r.nodes)),
                                 cell(r.dx),
                                 cell(r.dt),
                                 cell(t_end),
                                 r.failed ? std::string() : cell(r.error),
                                 cell(r.eoc),
                                 r.failed ? "failed" : "ok",
                                 cell(r.steps),
                                 cell(r.wall_time)};
    for (const auto& n : names) {
      const auto* s = find_summary(r.invariants, n);
      row.push_back(s ? cell(s->max_drift) : std::string());
    }
    row.push_back(sanitize(r.message));
    t.add_row(row);
  }
  return t;
}

std::vector<AssertionResult> LongtimeResult::check() const {
  std::vector<AssertionResult> out;
  if (config.assertions.conservative_better) {
    const bool want = *config.assertions.conservative_better;
    const bool got = conservative_better();
    out.push_back({"conservative error below standard", got ? 1.0 : 0.0, want ? 1.0 : 0.0, got == want});
  }
  return out;
}

// Solitary -------------------------------------------------------------------

SolitaryResult run_solitary(const ExperimentConfig& config) {
  config.validate();
  SolitaryResult result;
  result.config = config;
  PetviashviliConfig pv = default_petviashvili_config(config.equation);
  pv.speed = config.initial.speed;
  pv.kappa = config.initial.kappa;
  pv.domain = config.discretization.domain;
  pv.n = config.sizes.front();
  if (config.solver.tolerance > 0.0) pv.tolerance = config.solver.tolerance;
  pv.max_iterations = config.solver.max_iterations;
  result.wave = petviashvili(pv);
  result.transformed = kappa_transform(result.wave, result.wave.kappa);
  if (config.equation == Equation::bbm) {
    const auto a = bbm_solitary(pv.speed, pv.domain, pv.n);
    const double dx = pv.domain.length() / static_cast<double>(pv.n);
    result.reference_error = std::sqrt(dx) * (result.wave.profile - a.profile).norm();
  }
  return result;
}

std::string SolitaryResult::report_json() const {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["equation"] = to_string(wave.equation);
  j["speed"] = wave.speed;
  j["kappa"] = wave.kappa;
  j["domain"] = {wave.domain.x_min, wave.domain.x_max};
  j["n"] = static_cast<long>(wave.nodes.size());
  j["iterations"] = wave.iterations;
  j["residual"] = wave.residual;
  j["stabilizer"] = wave.stabilizer;
  j["residual_history"] = wave.residual_history;
  j["warnings"] = wave.warnings;
  j["transformed_speed"] = transformed.speed;
  j["transformed_offset"] = transformed.offset;
  if (reference_error) j["reference_error"] = *reference_error;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : check())
    checks.push_back({{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"passed", c.passed}});
  j["assertions"] = checks;
  return j.dump(2);
}

std::vector<AssertionResult> SolitaryResult::check() const {
  std::vector<AssertionResult> out;
  const auto& a = config.assertions;
  if (a.residual_max) out.push_back(at_most("Petviashvili residual", wave.residual, *a.residual_max));
  if (a.reference_error_max)
    out.push_back(at_most("distance to analytic wave",
                          reference_error.value_or(std::numeric_limits<double>::quiet_NaN()),
                          *a.reference_error_max));
  return out;
}

}  // namespace sbpwave::harness
