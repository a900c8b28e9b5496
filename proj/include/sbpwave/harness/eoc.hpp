#pragma once

#include <optional>
#include <vector>

namespace sbpwave::harness {

/// Pairwise slopes log(e[i-1]/e[i]) / log(n[i]/n[i-1]), i = 1..size-1.
/// A slope involving a non-positive or non-finite error is nullopt.
std::vector<std::optional<double>> compute_eoc(const std::vector<double>& errors,
                                               const std::vector<double>& sizes);

}  // namespace sbpwave::harness
