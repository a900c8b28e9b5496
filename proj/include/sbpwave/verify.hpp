#pragma once

#include "sbpwave/operators.hpp"

#include <string>
#include <vector>

namespace sbpwave {

struct CheckResult {
  std::string name;
  double residual = 0.0;   // relative to the check's scale
  double tolerance = 0.0;
  bool passed = false;
};

struct VerificationReport {
  std::string operator_name;
  std::vector<CheckResult> checks;
  int accuracy_order_claimed = 0;
  int accuracy_order_found = -1;
  bool spectral = false;

  bool passed() const;
  /// Names of failed checks, comma separated.
  std::string failures() const;
  /// Largest relative residual over all identity checks.
  double max_residual() const;
};

struct VerifyOptions {
  double tolerance = 1e-11;           // identities and eigenvalue signs, relative
  double accuracy_tolerance = 1e-10;  // polynomial / trigonometric exactness, relative
  int max_probe_order = 12;
};

VerificationReport verify_sbp(const SbpOperator1& op, const VerifyOptions& opts = {});
VerificationReport verify_sbp(const UpwindPair& op, const VerifyOptions& opts = {});
VerificationReport verify_sbp(const SbpOperator2& op, const VerifyOptions& opts = {});
VerificationReport verify_sbp(const SbpOperator4& op, const VerifyOptions& opts = {});

/// The compatibility condition A2 - D1^T M D1 >= 0 between a D1 and a D2 on the same grid.
CheckResult verify_compatibility(const SbpOperator1& d1, const SbpOperator2& d2,
                                 const VerifyOptions& opts = {});

/// Highest k such that D x^k = k!/(k-i)! x^(k-i) holds for all 0..k (i = derivative order).
/// Periodic operators use per-row unwrapped coordinates; spectral operators use
/// trigonometric modes and report twice the highest exact mode.
int measure_accuracy(const Matrix& d, const Grid& grid, int derivative, bool spectral,
                     double tolerance, int max_order);

/// Largest and smallest eigenvalue of (A + A^T) / 2.
std::pair<double, double> symmetric_eigen_range(const Matrix& a);

}  // namespace sbpwave
