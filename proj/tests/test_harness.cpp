#include "sbpwave/harness/config.hpp"
#include "sbpwave/harness/csv.hpp"
#include "sbpwave/harness/eoc.hpp"
#include "sbpwave/harness/experiments.hpp"
#include "sbpwave/harness/operator_check.hpp"
#include "test_support.hpp"

#include <cmath>
#include <sstream>

using namespace sbpwave;
using namespace sbpwave::harness;

namespace {

std::string csv_without(const CsvTable& t, const std::string& column) {
  const auto skip = t.column(column);
  std::ostringstream os;
  for (const auto& row : t.rows()) {
    for (size_t j = 0; j < row.size(); ++j)
      if (j != skip) os << row[j] << ',';
    os << '\n';
  }
  return os.str();
}

ExperimentConfig small_convergence() {
  auto c = default_config(ExperimentKind::convergence, Equation::bbm);
  c.sizes = {32, 64};
  c.time.t_end = 0.25;
  return c;
}

}  // namespace

TEST_CASE("config parsing rejects malformed documents") {
  const std::string base = R"({"schema_version": 1, "experiment": "convergence", "equation": "bbm")";
  CHECK_NOTHROW(parse_config(base + "}"));
  CHECK_THROWS_AS(parse_config(base + R"(, "colour": 1})"), ConfigurationError);
  CHECK_THROWS_AS(parse_config(base + R"(, "time": {"tableau": "rk4", "stepz": 3}})"), ConfigurationError);
  CHECK_THROWS_AS(parse_config(base + R"(, "assert": {"eoc_minimum": 3}})"), ConfigurationError);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 2, "experiment": "convergence"})"), ConfigurationError);
  CHECK_THROWS_AS(parse_config(R"({"experiment": "convergence"})"), ConfigurationError);
  CHECK_THROWS_AS(parse_config(base + R"(, "sizes": [64, 64, 128]})"), ConfigurationError);
  CHECK_THROWS_AS(parse_config(base + R"(, "sizes": [128, 64]})"), ConfigurationError);
  CHECK_THROWS_AS(parse_config(base + R"(, "sizes": []})"), ConfigurationError);
  CHECK_THROWS_AS(parse_config(base + R"(, "relaxation": {"enabled": true}})"), ConfigurationError);
  CHECK_THROWS_AS(parse_config(base + R"(, "time": {"tableau": "rk4", "adaptive": true}})"), ConfigurationError);
  CHECK_THROWS_AS(parse_config(base + R"(, "time": {"tableau": "rk7"}})"), ConfigurationError);
  CHECK_THROWS_AS(parse_config(base + R"(, "equation": "kdv"})"), ConfigurationError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigurationError);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "experiment": "longtime", "equation": "bbm"})"),
                  ConfigurationError);
}

TEST_CASE("config dump round-trips") {
  for (auto kind : {ExperimentKind::convergence, ExperimentKind::conservation, ExperimentKind::solitary,
                    ExperimentKind::operator_check}) {
    const auto c = default_config(kind, Equation::ch);
    const auto text = dump_config(c);
    CHECK(dump_config(parse_config(text)) == text);
  }
  const auto lt = default_config(ExperimentKind::longtime, Equation::bbm_bbm);
  CHECK(dump_config(parse_config(dump_config(lt))) == dump_config(lt));
}

TEST_CASE("compute_eoc examples") {
  auto e = compute_eoc({1.0, 0.25}, {10, 20});
  REQUIRE(e.size() == 1);
  CHECK(*e[0] == doctest::Approx(2.0).epsilon(1e-15));
  e = compute_eoc({1.0, 0.5, 0.25}, {10, 20, 40});
  REQUIRE(e.size() == 2);
  CHECK(*e[0] == doctest::Approx(1.0));
  CHECK(*e[1] == doctest::Approx(1.0));
  e = compute_eoc({1e-3, 1e-3 / 27.0}, {16, 48});
  CHECK(*e[0] == doctest::Approx(3.0));
  e = compute_eoc({1.0, 0.0, 0.5}, {10, 20, 40});
  CHECK_FALSE(e[0].has_value());
  CHECK_FALSE(e[1].has_value());
  e = compute_eoc({1.0, NAN}, {10, 20});
  CHECK_FALSE(e[0].has_value());
  CHECK_THROWS_AS(compute_eoc({1.0}, {10}), ConfigurationError);
  CHECK_THROWS_AS(compute_eoc({1.0, 0.5}, {10}), ConfigurationError);
  CHECK_THROWS_AS(compute_eoc({1.0, 0.5}, {10, 10}), ConfigurationError);
  CHECK_THROWS_AS(compute_eoc({1.0, 0.5}, {0, 10}), ConfigurationError);
}

TEST_CASE("csv cells and tables") {
  CHECK(cell(0.1) == "0.10000000000000001");
  CHECK(std::stod(cell(M_PI)) == M_PI);
  CHECK(cell(std::nan("")) == "nan");
  CHECK(cell(std::optional<double>{}).empty());
  CHECK(cell(42L) == "42");

  CsvTable t({"a", "b"});
  t.add_row({"1", cell(2.5)});
  CHECK_THROWS(t.add_row({"1"}));
  CHECK(t.column("b") == 1);
  CHECK_THROWS(t.column("c"));
  std::ostringstream os;
  t.write(os);
  CHECK(os.str().rfind("a,b\n", 0) == 0);
  std::istringstream is(os.str());
  const auto back = read_csv(is);
  CHECK(back.header() == t.header());
  CHECK(back.rows() == t.rows());
  std::istringstream empty("");
  CHECK_THROWS(read_csv(empty));
}

TEST_CASE("convergence study with a single grid has no EOC") {
  auto c = small_convergence();
  c.sizes = {32};
  const auto r = run_convergence(c);
  REQUIRE(r.rows.size() == 1);
  CHECK_FALSE(r.rows[0].eoc.has_value());
  CHECK_FALSE(r.finest_eoc().has_value());
  CHECK(r.rows[0].error > 0.0);
  c.assertions.eoc_min = 3.0;
  const auto checks = run_convergence(c).check();
  CHECK_FALSE(all_passed(checks));
}

TEST_CASE("convergence output is deterministic apart from timings") {
  const auto c = small_convergence();
  const auto a = run_convergence(c).table();
  const auto b = run_convergence(c).table();
  CHECK(csv_without(a, "wall_time_s") == csv_without(b, "wall_time_s"));
  const auto eoc = std::stod(a.rows()[1][a.column("eoc")]);
  CHECK(eoc > 3.0);
}

TEST_CASE("random conservation runs are deterministic for a seed") {
  auto c = default_config(ExperimentKind::conservation, Equation::bbm);
  c.sizes = {64};
  c.initial.kind = "random";
  c.time.t_end = 2.0;
  c.seed = 11;
  const auto a = run_conservation(c);
  const auto b = run_conservation(c);
  CHECK(a.series().rows() == b.series().rows());
  c.seed = 12;
  CHECK(run_conservation(c).series().rows() != a.series().rows());
}

TEST_CASE("zero initial data keeps every invariant constant") {
  for (auto eq : {Equation::bbm, Equation::bbm_bbm}) {
    auto c = default_config(ExperimentKind::conservation, eq);
    c.sizes = {32};
    c.initial.kind = "zero";
    c.time.t_end = 1.0;
    const auto r = run_conservation(c);
    for (const auto* run : {&r.relaxed, &r.unrelaxed})
      for (const auto& s : run->summary) {
        CHECK(s.final == s.initial);
        CHECK(s.max_drift == 0.0);
      }
  }
}

TEST_CASE("relative drift") {
  CHECK(relative_drift(2.0, 1.0) == 1.0);
  CHECK(relative_drift(-1.5, -1.0) == -0.5);
  CHECK(relative_drift(1e-3, 0.0) == 1e-3);
}

TEST_CASE("random smooth state vanishes at the walls") {
  auto c = default_config(ExperimentKind::conservation, Equation::bbm_bbm_reflecting);
  const auto sd = build_semidiscretization(c, 8);
  const Vector q = random_smooth_state(sd, 0.5, 4, 3);
  const Index n = q.size() / 2;
  CHECK(q(n) == 0.0);
  CHECK(q(2 * n - 1) == 0.0);
  CHECK(node_spacing(sd) == doctest::Approx(1.0 / n));
}

TEST_CASE("operator check passes and detects an injected fault") {
  OperatorCheckOptions opt;
  opt.vectors = 10;
  const auto r = run_operator_check(opt);
  CHECK(r.passed());
  CHECK(r.operators.size() > 100);
  CHECK_FALSE(r.goldens.empty());
  CHECK(r.counterexamples.size() == 3);
  opt.inject_fault = true;
  const auto bad = run_operator_check(opt);
  CHECK_FALSE(bad.passed());
  CHECK_FALSE(OperatorCheckReport::group_passed(bad.operators));
  CHECK(OperatorCheckReport::group_passed(bad.goldens));
  CHECK(bad.to_json().find("\"passed\": false") != std::string::npos);
}

TEST_CASE("long-time study over zero periods reproduces the initial wave") {
  auto c = default_config(ExperimentKind::longtime, Equation::bbm_bbm);
  c.sizes = {16};
  c.periods = 0.0;
  const auto r = run_longtime(c);
  REQUIRE(r.rows.size() == 2);
  for (const auto& row : r.rows) {
    CHECK_FALSE(row.failed);
    CHECK(row.steps == 0);
    CHECK(row.error == 0.0);
  }
}

TEST_CASE("solitary study for BBM matches the analytic wave") {
  auto c = default_config(ExperimentKind::solitary, Equation::bbm);
  c.assertions.reference_error_max = 1e-8;
  const auto r = run_solitary(c);
  REQUIRE(r.reference_error.has_value());
  CHECK(*r.reference_error < 1e-8);
  CHECK(all_passed(r.check()));
  CHECK(r.report_json().find("\"residual\"") != std::string::npos);
}
