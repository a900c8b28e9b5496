#include "sbpwave/equations.hpp"
#include "sbpwave/harness/config.hpp"
#include "sbpwave/harness/eoc.hpp"
#include "sbpwave/harness/experiments.hpp"
#include "sbpwave/harness/operator_check.hpp"
#include "sbpwave/solitary.hpp"
#include "sbpwave/timeint.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace sbpwave;

namespace {

using MutablePtr = std::shared_ptr<Semidiscretization>;

DiscretizationSpec make_spec(const std::string& family, int order, const std::string& stencil, Index n,
                             std::pair<double, double> domain, bool periodic) {
  DiscretizationSpec s;
  s.family = family_from_string(family);
  s.order = order;
  s.stencil = stencil_kind_from_string(stencil);
  s.n = n;
  s.domain = {domain.first, domain.second};
  s.periodic = periodic;
  return s;
}

SemidiscretizationPtr make_sd(const std::string& equation, const DiscretizationSpec& spec, double alpha) {
  const auto e = equation_from_string(equation);
  const auto b = make_bundle(spec);
  if (e == Equation::bbm_bbm_reflecting) return make_bbm_bbm_reflecting(b.D1);
  EquationParameters p;
  p.alpha = alpha;
  return make_semidiscretization(e, b, p);
}

py::dict wave_dict(const TravelingWave& w) {
  py::dict d;
  d["equation"] = to_string(w.equation);
  d["speed"] = w.speed;
  d["kappa"] = w.kappa;
  d["nodes"] = w.nodes;
  d["profile"] = w.profile;
  d["residual"] = w.residual;
  d["iterations"] = w.iterations;
  d["warnings"] = w.warnings;
  return d;
}

template <class Result>
py::dict result_dict(const Result& r) {
  py::dict d;
  py::list checks;
  for (const auto& c : r.check()) {
    py::dict x;
    x["name"] = c.name;
    x["value"] = c.value;
    x["bound"] = c.bound;
    x["passed"] = c.passed;
    checks.append(x);
  }
  d["assertions"] = checks;
  d["passed"] = harness::all_passed(r.check());
  return d;
}

std::string csv_text(const harness::CsvTable& t) {
  std::ostringstream os;
  t.write(os);
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "SBP discretizations of dispersive wave equations";
#ifdef SBPWAVE_VERSION
  m.attr("__version__") = SBPWAVE_VERSION;
#endif

  py::register_exception<ConfigurationError>(m, "ConfigurationError", PyExc_ValueError);
  py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_RuntimeError);
  py::register_exception<StepFailure>(m, "StepFailure", PyExc_RuntimeError);

  m.def(
      "operators",
      [](const std::string& family, int order, const std::string& stencil, Index n,
         std::pair<double, double> domain, bool periodic) {
        const auto b = make_bundle(make_spec(family, order, stencil, n, domain, periodic));
        py::dict d;
        d["nodes"] = b.grid().nodes;
        d["M"] = b.M().to_dense();
        d["D1"] = b.D1.D1;
        d["D2_wide"] = b.D2a.D2;
        d["D2"] = b.D2b.D2;
        if (b.upwind) {
          d["Dplus"] = b.upwind->Dplus;
          d["Dminus"] = b.upwind->Dminus;
        }
        if (b.D4b) d["D4"] = b.D4b->D4;
        d["description"] = b.description;
        return d;
      },
      py::arg("family"), py::arg("order") = 2, py::arg("stencil") = "wide", py::arg("n") = 64,
      py::arg("domain") = std::pair<double, double>{0.0, 1.0}, py::arg("periodic") = true,
      "Operator bundle as dense numpy arrays.");

  py::class_<Semidiscretization, MutablePtr>(m, "Semidiscretization")
      .def(py::init([](const std::string& equation, const std::string& family, int order,
                       const std::string& stencil, Index n, std::pair<double, double> domain, bool periodic,
                       double alpha) {
             return std::const_pointer_cast<Semidiscretization>(
                 make_sd(equation, make_spec(family, order, stencil, n, domain, periodic), alpha));
           }),
           py::arg("equation"), py::arg("family") = "fourier", py::arg("order") = 2, py::arg("stencil") = "wide",
           py::arg("n") = 64, py::arg("domain") = std::pair<double, double>{0.0, 1.0},
           py::arg("periodic") = true, py::arg("alpha") = 0.5)
      .def_property_readonly("equation", [](const Semidiscretization& s) { return to_string(s.equation()); })
      .def_property_readonly("nodes", [](const Semidiscretization& s) { return Vector(s.grid().nodes); })
      .def_property_readonly("state_size", &Semidiscretization::state_size)
      .def("rhs", py::overload_cast<const Vector&>(&Semidiscretization::rhs, py::const_), py::arg("state"))
      .def("norm", &Semidiscretization::norm, py::arg("state"))
      .def("invariant_names", [](const Semidiscretization& s) { return s.invariants().names(); })
      .def(
          "invariants",
          [](const Semidiscretization& s, const Vector& state) {
            py::dict d;
            for (const auto& j : s.invariants().items) d[py::str(j.name)] = j.value(state);
            return d;
          },
          py::arg("state"))
      .def(
          "conserved",
          [](const Semidiscretization& s) {
            py::dict d;
            for (const auto& j : s.invariants().items) d[py::str(j.name)] = j.conserved;
            return d;
          });

  m.def(
      "integrate",
      [](const MutablePtr& sd, const Vector& u0, double t_end, const std::string& tableau, double dt,
         bool relaxation, const std::string& invariant, int record_every) {
        IntegrateOptions opt;
        opt.tableau = tableau_from_string(tableau);
        opt.policy.dt = dt;
        opt.relaxation = relaxation;
        opt.relax.invariant = invariant;
        opt.invariants = sd->invariants().items;
        opt.record_every = record_every;
        Trajectory tr;
        {
          py::gil_scoped_release release;
          tr = integrate(as_rhs(sd), u0, 0.0, t_end, opt);
        }
        std::vector<double> t, gamma;
        std::vector<std::vector<double>> inv;
        for (const auto& r : tr.records) {
          t.push_back(r.t);
          gamma.push_back(r.gamma);
          inv.push_back(r.invariants);
        }
        py::dict d;
        d["t"] = t;
        d["gamma"] = gamma;
        d["invariants"] = inv;
        d["invariant_names"] = tr.invariant_names;
        d["final_state"] = tr.final_state;
        d["t_final"] = tr.t_final;
        d["steps"] = tr.steps;
        return d;
      },
      py::arg("sd"), py::arg("u0"), py::arg("t_end"), py::arg("tableau") = "rk4", py::arg("dt") = 1e-2,
      py::arg("relaxation") = false, py::arg("invariant") = "J2", py::arg("record_every") = 1,
      "Fixed-step explicit Runge-Kutta integration, optionally with relaxation.");

  m.def(
      "petviashvili",
      [](const std::string& equation, std::optional<double> speed, std::optional<double> kappa,
         std::optional<Index> n, std::optional<double> tolerance) {
        auto c = default_petviashvili_config(equation_from_string(equation));
        if (speed) c.speed = *speed;
        if (kappa) c.kappa = *kappa;
        if (n) c.n = *n;
        if (tolerance) c.tolerance = *tolerance;
        return wave_dict(petviashvili(c));
      },
      py::arg("equation"), py::arg("speed") = py::none(), py::arg("kappa") = py::none(), py::arg("n") = py::none(),
      py::arg("tolerance") = py::none(), "Traveling-wave profile on a Fourier grid.");

  m.def(
      "bbm_solitary",
      [](double c, std::pair<double, double> domain, Index n) {
        return wave_dict(bbm_solitary(c, {domain.first, domain.second}, n));
      },
      py::arg("speed") = 1.2, py::arg("domain") = std::pair<double, double>{-90.0, 90.0}, py::arg("n") = 1024);

  m.def("compute_eoc", &harness::compute_eoc, py::arg("errors"), py::arg("sizes"));

  m.def(
      "operator_check",
      [](std::uint64_t seed, int vectors, bool inject_fault) {
        harness::OperatorCheckOptions o;
        o.seed = seed;
        o.vectors = vectors;
        o.inject_fault = inject_fault;
        return harness::run_operator_check(o).to_json();
      },
      py::arg("seed") = 0, py::arg("vectors") = 100, py::arg("inject_fault") = false,
      "Operator, golden and lemma report as a JSON string.");

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const auto c = harness::parse_config(config_json);
        c.validate();
        py::dict d;
        switch (c.kind) {
          case harness::ExperimentKind::convergence: {
            const auto r = harness::run_convergence(c);
            d = result_dict(r);
            d["csv"] = csv_text(r.table());
            break;
          }
          case harness::ExperimentKind::conservation: {
            const auto r = harness::run_conservation(c);
            d = result_dict(r);
            d["csv"] = csv_text(r.series());
            d["summary_csv"] = csv_text(r.summary());
            break;
          }
          case harness::ExperimentKind::longtime: {
            const auto r = harness::run_longtime(c);
            d = result_dict(r);
            d["csv"] = csv_text(r.table());
            break;
          }
          case harness::ExperimentKind::solitary: {
            const auto r = harness::run_solitary(c);
            d = result_dict(r);
            d["json"] = r.report_json();
            break;
          }
          case harness::ExperimentKind::operator_check: {
            harness::OperatorCheckOptions o;
            o.seed = c.seed;
            o.inject_fault = c.inject_fault;
            const auto r = harness::run_operator_check(o);
            d["passed"] = r.passed();
            d["json"] = r.to_json();
            break;
          }
        }
        return d;
      },
      py::arg("config_json"), "Runs one harness experiment from a JSON config document.");
}
