#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sbpwave::harness {

struct CheckEntry {
  std::string group;
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct OperatorCheckReport {
  std::uint64_t seed = 0;
  int vectors = 0;
  /// verify_sbp over every shipped family.
  std::vector<CheckEntry> operators;
  /// Printed 4x4 example matrices.
  std::vector<CheckEntry> goldens;
  /// Random-vector property checks.
  std::vector<CheckEntry> lemmas;
  /// Non-commuting pairs that must break skew-symmetry.
  std::vector<CheckEntry> counterexamples;

  bool passed() const;
  static bool group_passed(const std::vector<CheckEntry>& entries);
  std::string to_json() const;
};

struct OperatorCheckOptions {
  std::uint64_t seed = 0;
  /// Random vectors per lemma and operator.
  int vectors = 100;
  double lemma_tolerance = 1e-10;
  double golden_tolerance = 1e-14;
  bool inject_fault = false;
};

OperatorCheckReport run_operator_check(const OperatorCheckOptions& options = {});

}  // namespace sbpwave::harness
