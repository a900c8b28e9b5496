#include "sbpwave/harness/config.hpp"

#include "sbpwave/solitary.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace sbpwave::harness {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& keys, const std::string& where) {
  if (!obj.is_object()) throw ConfigurationError("config: '" + where + "' must be an object");
  for (const auto& [key, value] : obj.items())
    if (!keys.count(key)) throw ConfigurationError("config: unknown key '" + key + "' in " + where);
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

template <class T>
void read_optional(const json& obj, const char* key, std::optional<T>& out) {
  if (!obj.contains(key)) return;
  T v{};
  read(obj, key, v);
  out = v;
}

std::string relaxed_invariant_default(Equation e) {
  switch (e) {
    case Equation::fw:
    case Equation::hh:
    case Equation::bbm_bbm:
    case Equation::bbm_bbm_reflecting: return "J3";
    default: return "J2";
  }
}

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::convergence: return "convergence";
    case ExperimentKind::conservation: return "conservation";
    case ExperimentKind::operator_check: return "operator_check";
    case ExperimentKind::solitary: return "solitary";
    case ExperimentKind::longtime: return "longtime";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  for (auto k : {ExperimentKind::convergence, ExperimentKind::conservation, ExperimentKind::operator_check,
                 ExperimentKind::solitary, ExperimentKind::longtime})
    if (to_string(k) == s) return k;
  throw ConfigurationError("unknown experiment kind '" + s + "'");
}

ExperimentConfig default_config(ExperimentKind kind, Equation equation) {
  ExperimentConfig c;
  c.kind = kind;
  c.equation = equation;
  c.relaxation.invariant = relaxed_invariant_default(equation);
  auto& d = c.discretization;
  switch (kind) {
    case ExperimentKind::convergence:
      d.family = Family::fd_periodic;
      d.order = 4;
      d.domain = {0.0, 1.0};
      d.periodic = equation != Equation::bbm_bbm_reflecting;
      if (!d.periodic) {
        d.family = Family::cg;
        d.order = 2;
      }
      c.sizes = d.periodic ? std::vector<Index>{64, 128, 256, 512} : std::vector<Index>{8, 16, 32, 64};
      c.time.tableau = "dp5";
      c.time.adaptive = true;
      c.time.dt = 1e-3;
      c.time.t_end = 1.0;
      c.record_every = 1000000;
      break;
    case ExperimentKind::conservation:
      c.relaxation.enabled = true;
      c.time.tableau = "rk4";
      if (equation == Equation::bbm_bbm_reflecting) {
        d.family = Family::cg;
        d.order = 3;
        d.periodic = false;
        d.domain = {0.0, 1.0};
        c.sizes = {16};
        c.initial.kind = "random";
        c.time.dt = 1e-3;
        c.time.t_end = 0.5;
      } else {
        d.family = Family::fourier;
        d.periodic = true;
        const bool analytic = equation == Equation::bbm || equation == Equation::bbm_dissipative;
        const auto pv = default_petviashvili_config(analytic ? Equation::bbm : equation);
        d.domain = pv.domain;
        c.initial.kappa = analytic ? 0.0 : pv.kappa;
        c.sizes = {128};
        c.time.t_end = 90.0;
      }
      break;
    case ExperimentKind::longtime: {
      d.family = Family::cg;
      d.order = 4;
      d.periodic = true;
      d.domain = {-90.0, 90.0};
      c.sizes = {16, 24, 32};
      c.time.tableau = "butcher6";
      c.time.cfl = 0.5;
      c.relaxation.enabled = true;
      c.record_every = 100;
      break;
    }
    case ExperimentKind::solitary: {
      const auto pv = default_petviashvili_config(equation);
      d.family = Family::fourier;
      d.domain = pv.domain;
      c.sizes = {pv.n};
      c.initial.speed = pv.speed;
      c.initial.kappa = pv.kappa;
      c.solver.tolerance = pv.tolerance;
      c.solver.n = pv.n;
      c.assertions.residual_max = 1e-10;
      break;
    }
    case ExperimentKind::operator_check: break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  const bool needs_sizes = kind != ExperimentKind::operator_check;
  if (needs_sizes && sizes.empty()) throw ConfigurationError("config: sizes must not be empty");
  for (size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] <= 0) throw ConfigurationError("config: sizes must be positive");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw ConfigurationError("config: sizes must be strictly increasing");
  }
  if (kind == ExperimentKind::conservation && sizes.size() != 1)
    throw ConfigurationError("config: a conservation run uses exactly one grid size");
  if (kind == ExperimentKind::convergence && relaxation.enabled)
    throw ConfigurationError("config: relaxation does not apply to manufactured-solution runs");
  if (kind == ExperimentKind::longtime && equation != Equation::bbm_bbm)
    throw ConfigurationError("config: the long-time study is defined for bbm_bbm");
  if (inject_fault && kind != ExperimentKind::operator_check)
    throw ConfigurationError("config: inject_fault applies to operator_check only");
  if (record_every < 1) throw ConfigurationError("config: record_every must be >= 1");
  if (!(periods >= 0.0)) throw ConfigurationError("config: periods must be >= 0");
  if (!(time.t_end >= 0.0)) throw ConfigurationError("config: t_end must be >= 0");
  if (!(time.cfl > 0.0) || !(time.dt >= 0.0)) throw ConfigurationError("config: cfl must be positive and dt >= 0");
  if (!(time.abstol > 0.0) || !(time.reltol > 0.0)) throw ConfigurationError("config: tolerances must be positive");
  if (!std::isfinite(params.alpha)) throw ConfigurationError("config: alpha must be finite");
  if (!(discretization.domain.length() > 0.0)) throw ConfigurationError("config: empty domain");
  const auto& k = initial.kind;
  if (k != "solitary" && k != "random" && k != "zero")
    throw ConfigurationError("config: initial_condition.kind must be solitary, random or zero");
  if (initial.modes < 1) throw ConfigurationError("config: initial_condition.modes must be >= 1");
  (void)tableau_from_string(time.tableau);
  if (time.adaptive && !tableau_from_string(time.tableau).b_hat)
    throw ConfigurationError("config: adaptive stepping needs an embedded pair");
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("config: invalid JSON: ") + e.what());
  }
  reject_unknown(doc,
                 {"schema_version", "experiment", "equation", "alpha", "discretization", "sizes", "time",
                  "relaxation", "initial_condition", "solver", "record_every", "periods", "seed", "output",
                  "expect_nonconservative", "inject_fault", "assert"},
                 "config");
  int version = 0;
  read(doc, "schema_version", version);
  if (version != schema_version)
    throw ConfigurationError("config: schema_version must be " + std::to_string(schema_version));
  if (!doc.contains("experiment")) throw ConfigurationError("config: missing 'experiment'");
  std::string kind, equation = "bbm";
  read(doc, "experiment", kind);
  if (kind == "longtime") equation = "bbm_bbm";
  read(doc, "equation", equation);
  ExperimentConfig c = default_config(experiment_kind_from_string(kind), equation_from_string(equation));

  read(doc, "alpha", c.params.alpha);
  if (doc.contains("discretization")) {
    const auto& d = doc["discretization"];
    reject_unknown(d, {"family", "order", "stencil", "domain", "periodic"}, "discretization");
    std::string family = to_string(c.discretization.family), stencil = to_string(c.discretization.stencil);
    read(d, "family", family);
    read(d, "stencil", stencil);
    c.discretization.family = family_from_string(family);
    c.discretization.stencil = stencil_kind_from_string(stencil);
    read(d, "order", c.discretization.order);
    read(d, "periodic", c.discretization.periodic);
    if (d.contains("domain")) {
      std::vector<double> dom;
      read(d, "domain", dom);
      if (dom.size() != 2) throw ConfigurationError("config: domain must be [x_min, x_max]");
      c.discretization.domain = {dom[0], dom[1]};
    }
  }
  if (doc.contains("sizes")) {
    std::vector<long> sizes;
    read(doc, "sizes", sizes);
    c.sizes.assign(sizes.begin(), sizes.end());
  }
  if (doc.contains("time")) {
    const auto& t = doc["time"];
    reject_unknown(t, {"tableau", "adaptive", "dt", "cfl", "abstol", "reltol", "t_end"}, "time");
    read(t, "tableau", c.time.tableau);
    read(t, "adaptive", c.time.adaptive);
    read(t, "dt", c.time.dt);
    read(t, "cfl", c.time.cfl);
    read(t, "abstol", c.time.abstol);
    read(t, "reltol", c.time.reltol);
    read(t, "t_end", c.time.t_end);
  }
  if (doc.contains("relaxation")) {
    const auto& r = doc["relaxation"];
    reject_unknown(r, {"enabled", "invariant"}, "relaxation");
    read(r, "enabled", c.relaxation.enabled);
    read(r, "invariant", c.relaxation.invariant);
  }
  if (doc.contains("initial_condition")) {
    const auto& i = doc["initial_condition"];
    reject_unknown(i, {"kind", "speed", "kappa", "amplitude", "modes"}, "initial_condition");
    read(i, "kind", c.initial.kind);
    read(i, "speed", c.initial.speed);
    read(i, "kappa", c.initial.kappa);
    read(i, "amplitude", c.initial.amplitude);
    read(i, "modes", c.initial.modes);
  }
  if (doc.contains("solver")) {
    const auto& s = doc["solver"];
    reject_unknown(s, {"n", "tolerance", "max_iterations"}, "solver");
    long n = c.solver.n;
    read(s, "n", n);
    c.solver.n = n;
    read(s, "tolerance", c.solver.tolerance);
    read(s, "max_iterations", c.solver.max_iterations);
  }
  read(doc, "record_every", c.record_every);
  read(doc, "periods", c.periods);
  read(doc, "seed", c.seed);
  read(doc, "output", c.output);
  read(doc, "expect_nonconservative", c.expect_nonconservative);
  read(doc, "inject_fault", c.inject_fault);
  if (doc.contains("assert")) {
    const auto& a = doc["assert"];
    reject_unknown(a,
                   {"eoc_min", "eoc_max", "drift_max", "unrelaxed_ratio_min", "half_ratio_max",
                    "half_ratio_invariant", "residual_max", "reference_error_max", "conservative_better"},
                   "assert");
    read_optional(a, "eoc_min", c.assertions.eoc_min);
    read_optional(a, "eoc_max", c.assertions.eoc_max);
    read_optional(a, "drift_max", c.assertions.drift_max);
    read_optional(a, "unrelaxed_ratio_min", c.assertions.unrelaxed_ratio_min);
    read_optional(a, "half_ratio_max", c.assertions.half_ratio_max);
    read(a, "half_ratio_invariant", c.assertions.half_ratio_invariant);
    read_optional(a, "residual_max", c.assertions.residual_max);
    read_optional(a, "reference_error_max", c.assertions.reference_error_max);
    read_optional(a, "conservative_better", c.assertions.conservative_better);
  }
  if (c.kind == ExperimentKind::solitary && c.solver.n > 0 && !doc.contains("sizes")) c.sizes = {c.solver.n};
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& c) {
  json doc;
  doc["schema_version"] = schema_version;
  doc["experiment"] = to_string(c.kind);
  doc["equation"] = to_string(c.equation);
  doc["alpha"] = c.params.alpha;
  doc["discretization"] = {{"family", to_string(c.discretization.family)},
                           {"order", c.discretization.order},
                           {"stencil", to_string(c.discretization.stencil)},
                           {"domain", {c.discretization.domain.x_min, c.discretization.domain.x_max}},
                           {"periodic", c.discretization.periodic}};
  doc["sizes"] = std::vector<long>(c.sizes.begin(), c.sizes.end());
  doc["time"] = {{"tableau", c.time.tableau}, {"adaptive", c.time.adaptive}, {"dt", c.time.dt},
                 {"cfl", c.time.cfl},         {"abstol", c.time.abstol},     {"reltol", c.time.reltol},
                 {"t_end", c.time.t_end}};
  doc["relaxation"] = {{"enabled", c.relaxation.enabled}, {"invariant", c.relaxation.invariant}};
  doc["initial_condition"] = {{"kind", c.initial.kind},
                              {"speed", c.initial.speed},
                              {"kappa", c.initial.kappa},
                              {"amplitude", c.initial.amplitude},
                              {"modes", c.initial.modes}};
  doc["solver"] = {{"n", static_cast<long>(c.solver.n)},
                   {"tolerance", c.solver.tolerance},
                   {"max_iterations", c.solver.max_iterations}};
  doc["record_every"] = c.record_every;
  doc["periods"] = c.periods;
  doc["seed"] = c.seed;
  doc["output"] = c.output;
  doc["expect_nonconservative"] = c.expect_nonconservative;
  doc["inject_fault"] = c.inject_fault;
  json a = json::object();
  const auto& s = c.assertions;
  if (s.eoc_min) a["eoc_min"] = *s.eoc_min;
  if (s.eoc_max) a["eoc_max"] = *s.eoc_max;
  if (s.drift_max) a["drift_max"] = *s.drift_max;
  if (s.unrelaxed_ratio_min) a["unrelaxed_ratio_min"] = *s.unrelaxed_ratio_min;
  if (s.half_ratio_max) {
    a["half_ratio_max"] = *s.half_ratio_max;
    a["half_ratio_invariant"] = s.half_ratio_invariant;
  }
  if (s.residual_max) a["residual_max"] = *s.residual_max;
  if (s.reference_error_max) a["reference_error_max"] = *s.reference_error_max;
  if (s.conservative_better) a["conservative_better"] = *s.conservative_better;
  doc["assert"] = a;
  return doc.dump(2);
}

}  // namespace sbpwave::harness
