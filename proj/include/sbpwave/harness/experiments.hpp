#pragma once

#include "sbpwave/harness/config.hpp"
#include "sbpwave/harness/csv.hpp"
#include "sbpwave/solitary.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sbpwave::harness {

struct AssertionResult {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool passed = false;
};

bool all_passed(const std::vector<AssertionResult>& results);

/// Per-invariant summary of one trajectory.
struct InvariantSummary {
  std::string name;
  bool conserved = false;
  double initial = 0.0;
  double final = 0.0;
  /// max |J(t) - J(0)| / |J(0)| (absolute when J(0) = 0).
  double max_drift = 0.0;
  double first_half_max = 0.0;
  double second_half_max = 0.0;
};

std::vector<InvariantSummary> summarize(const Trajectory& tr, const std::vector<Invariant>& invariants);
/// Signed relative drift (J - J0) / |J0|, absolute when J0 = 0.
double relative_drift(double value, double initial);

struct ConvergenceRow {
  Index n = 0;
  Index nodes = 0;
  double dx = 0.0;
  double error = 0.0;
  std::optional<double> eoc;
  bool failed = false;
  std::string message;
  long steps = 0;
  long rejected = 0;
  double wall_time = 0.0;
  std::vector<InvariantSummary> invariants;
};

struct ConvergenceResult {
  ExperimentConfig config;
  std::vector<ConvergenceRow> rows;

  /// EOC between the two finest successful grids.
  std::optional<double> finest_eoc() const;
  CsvTable table() const;
  std::vector<AssertionResult> check() const;
};

/// Manufactured-solution study, one row per grid size; failed rows are marked and skipped.
ConvergenceResult run_convergence(const ExperimentConfig& config);

struct ConservationRun {
  bool relaxation = false;
  Trajectory trajectory;
  std::vector<InvariantSummary> summary;
  double gamma_min = 1.0;
  double gamma_max = 1.0;
  double wall_time = 0.0;
};

struct ConservationResult {
  ExperimentConfig config;
  std::vector<Invariant> invariants;
  Index nodes = 0;
  double dt = 0.0;
  ConservationRun relaxed;
  ConservationRun unrelaxed;

  /// Time series of both sub-runs.
  CsvTable series() const;
  /// One row per (sub-run, invariant).
  CsvTable summary() const;
  std::vector<AssertionResult> check() const;
};

/// Relaxation-on and relaxation-off runs from the same initial state.
ConservationResult run_conservation(const ExperimentConfig& config);

struct LongtimeRow {
  std::string variant;
  Index n = 0;
  Index nodes = 0;
  double dx = 0.0;
  double dt = 0.0;
  double error = 0.0;
  std::optional<double> eoc;
  bool failed = false;
  std::string message;
  long steps = 0;
  double wall_time = 0.0;
  std::vector<InvariantSummary> invariants;
};

struct LongtimeResult {
  ExperimentConfig config;
  double t_end = 0.0;
  std::vector<LongtimeRow> rows;

  /// Some resolution where the conservative error is below the standard one.
  bool conservative_better() const;
  CsvTable table() const;
  std::vector<AssertionResult> check() const;
};

/// Standard (narrow D2, no relaxation) vs conservative (wide D2, relaxation) traveling-wave runs.
LongtimeResult run_longtime(const ExperimentConfig& config);

struct SolitaryResult {
  ExperimentConfig config;
  TravelingWave wave;
  /// Wave of the kappa = 0 equation (identical to wave when kappa = 0).
  TravelingWave transformed;
  std::optional<double> reference_error;

  std::string report_json() const;
  std::vector<AssertionResult> check() const;
};

SolitaryResult run_solitary(const ExperimentConfig& config);

/// Traveling-wave initial data for a semidiscretization: analytic BBM wave or a
/// Petviashvili profile (kappa-transformed to the kappa = 0 equation).
TravelingWave traveling_wave_for(const ExperimentConfig& config);

/// Mean amplitude plus random modes; reflecting BBM-BBM data satisfies the wall conditions.
Vector random_smooth_state(const SemidiscretizationPtr& sd, double amplitude, int modes,
                           std::uint64_t seed);

/// Semidiscretization of config.equation on n nodes/elements.
SemidiscretizationPtr build_semidiscretization(const ExperimentConfig& config, Index n);

/// Mean node spacing (domain length / nodes).
double node_spacing(const SemidiscretizationPtr& sd);

}  // namespace sbpwave::harness
