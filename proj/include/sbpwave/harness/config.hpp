#pragma once

#include "sbpwave/equations.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sbpwave::harness {

enum class ExperimentKind { convergence, conservation, operator_check, solitary, longtime };

std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& s);

struct TimeSettings {
  std::string tableau = "rk4";
  bool adaptive = false;
  /// Fixed step; 0 selects cfl * (domain length / nodes).
  double dt = 0.0;
  double cfl = 0.25;
  double abstol = 1e-12;
  double reltol = 1e-12;
  double t_end = 1.0;
};

struct RelaxationSettings {
  bool enabled = false;
  std::string invariant = "J2";
};

struct InitialCondition {
  /// solitary | random | zero
  std::string kind = "solitary";
  double speed = 1.2;
  double kappa = 0.0;
  /// Amplitude of random smooth data.
  double amplitude = 0.1;
  int modes = 4;
};

struct SolverSettings {
  /// Petviashvili grid size and tolerance; 0 keeps the per-equation default.
  Index n = 0;
  double tolerance = 0.0;
  int max_iterations = 2000;
};

/// Checks evaluated after a run; the CLI exits with 1 when any fails.
struct Assertions {
  std::optional<double> eoc_min;
  std::optional<double> eoc_max;
  /// Relaxed run: relative drift of every conserved invariant.
  std::optional<double> drift_max;
  /// Unrelaxed over relaxed drift of the relaxed invariant.
  std::optional<double> unrelaxed_ratio_min;
  /// Relaxed run: second-half over first-half max drift of half_ratio_invariant.
  std::optional<double> half_ratio_max;
  std::string half_ratio_invariant = "J3";
  std::optional<double> residual_max;
  /// BBM only: M-norm distance of the Petviashvili profile to the analytic wave.
  std::optional<double> reference_error_max;
  std::optional<bool> conservative_better;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::convergence;
  Equation equation = Equation::bbm;
  EquationParameters params;
  /// n is taken from sizes.
  DiscretizationSpec discretization;
  std::vector<Index> sizes;
  TimeSettings time;
  RelaxationSettings relaxation;
  InitialCondition initial;
  SolverSettings solver;
  int record_every = 1;
  double periods = 5.0;
  std::uint64_t seed = 0;
  std::string output;
  bool expect_nonconservative = false;
  /// operator_check only: perturb one operator so the report must fail.
  bool inject_fault = false;
  Assertions assertions;

  void validate() const;
};

inline constexpr int schema_version = 1;

/// Defaults of an experiment kind for one equation.
ExperimentConfig default_config(ExperimentKind kind, Equation equation = Equation::bbm);

/// JSON document with schema_version 1; unknown keys throw ConfigurationError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string dump_config(const ExperimentConfig& config);

}  // namespace sbpwave::harness
