#include "sbpwave/harness/config.hpp"
#include "sbpwave/harness/experiments.hpp"
#include "sbpwave/harness/operator_check.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

using namespace sbpwave;
using namespace sbpwave::harness;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool no_relaxation = false;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ConfigurationError("cannot write " + path);
  f << text;
}

std::string sibling(const std::string& path, const std::string& suffix, const std::string& extension) {
  const std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + extension)).string();
}

int report(const std::vector<AssertionResult>& results) {
  for (const auto& r : results)
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.value << " (bound " << r.bound << ")\n";
  return all_passed(results) ? 0 : 1;
}

ExperimentConfig resolve(ExperimentKind kind, const Options& o) {
  ExperimentConfig c = o.config.empty()
                           ? default_config(kind, kind == ExperimentKind::longtime ? Equation::bbm_bbm : Equation::bbm)
                           : load_config(o.config);
  if (c.kind != kind)
    throw ConfigurationError("config describes a " + to_string(c.kind) + " experiment, not " + to_string(kind));
  if (!o.out.empty()) c.output = o.out;
  if (o.seed) c.seed = *o.seed;
  if (o.no_relaxation) {
    if (kind == ExperimentKind::conservation)
      throw ConfigurationError("--no-relaxation: conservation runs always compare both variants");
    c.relaxation.enabled = false;
  }
  c.validate();
  return c;
}

void emit(const CsvTable& table, const std::string& path) {
  if (path.empty())
    table.write(std::cout);
  else
    table.save(path);
}

int run(ExperimentKind kind, const Options& o) {
  const ExperimentConfig c = resolve(kind, o);
  switch (kind) {
    case ExperimentKind::operator_check: {
      OperatorCheckOptions opt;
      opt.seed = c.seed;
      opt.inject_fault = c.inject_fault;
      const auto r = run_operator_check(opt);
      if (c.output.empty())
        std::cout << r.to_json() << '\n';
      else
        write_text(c.output, r.to_json() + "\n");
      for (const auto* g : {&r.operators, &r.goldens, &r.lemmas, &r.counterexamples})
        for (const auto& e : *g)
          if (!e.passed) std::cerr << "FAIL " << e.group << ": " << e.name << " residual " << e.residual << '\n';
      std::cerr << (r.passed() ? "PASS" : "FAIL") << " operator check (" << r.operators.size() << " operators, "
                << r.goldens.size() << " goldens, " << r.lemmas.size() << " lemma checks, "
                << r.counterexamples.size() << " counterexamples)\n";
      return r.passed() ? 0 : 1;
    }
    case ExperimentKind::convergence: {
      const auto r = run_convergence(c);
      emit(r.table(), c.output);
      return report(r.check());
    }
    case ExperimentKind::conservation: {
      const auto r = run_conservation(c);
      emit(r.series(), c.output);
      if (c.output.empty())
        r.summary().write(std::cerr);
      else
        r.summary().save(sibling(c.output, "_summary", ".csv"));
      return report(r.check());
    }
    case ExperimentKind::solitary: {
      const auto r = run_solitary(c);
      if (c.output.empty()) {
        std::cout << r.report_json() << '\n';
      } else {
        std::ofstream f(c.output);
        if (!f) throw ConfigurationError("cannot write " + c.output);
        write_wave_csv(f, r.transformed);
        write_text(sibling(c.output, "", ".json"), r.report_json() + "\n");
      }
      for (const auto& w : r.wave.warnings) std::cerr << "warning: " << w << '\n';
      return report(r.check());
    }
    case ExperimentKind::longtime: {
      const auto r = run_longtime(c);
      emit(r.table(), c.output);
      return report(r.check());
    }
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sbpwave: SBP discretizations of dispersive wave equations"};
  app.require_subcommand(1);
  Options o;
  const std::pair<const char*, ExperimentKind> commands[] = {
      {"ops-check", ExperimentKind::operator_check},
      {"convergence", ExperimentKind::convergence},
      {"conserve", ExperimentKind::conservation},
      {"solitary", ExperimentKind::solitary},
      {"longtime", ExperimentKind::longtime},
  };
  const char* help[] = {"verify operators, goldens and lemmas (JSON report)",
                        "manufactured-solution convergence study (CSV)",
                        "invariant drift with and without relaxation (CSV)",
                        "Petviashvili traveling wave (CSV profile + JSON report)",
                        "long-time traveling-wave error comparison (CSV)"};
  std::vector<std::pair<CLI::App*, ExperimentKind>> subs;
  for (size_t i = 0; i < std::size(commands); ++i) {
    auto* sub = app.add_subcommand(commands[i].first, help[i]);
    sub->add_option("--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output path (stdout when omitted)");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_flag("--no-relaxation", o.no_relaxation, "disable relaxation");
    subs.emplace_back(sub, commands[i].second);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  for (const auto& [sub, kind] : subs) {
    if (!sub->parsed()) continue;
    try {
      return run(kind, o);
    } catch (const ConfigurationError& e) {
      std::cerr << "configuration error: " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return 2;
}
