#include "sbpwave/harness/eoc.hpp"

#include "sbpwave/core.hpp"

#include <cmath>

namespace sbpwave::harness {

std::vector<std::optional<double>> compute_eoc(const std::vector<double>& errors,
                                               const std::vector<double>& sizes) {
  if (errors.size() != sizes.size()) throw ConfigurationError("compute_eoc: errors and sizes differ in length");
  if (errors.size() < 2) throw ConfigurationError("compute_eoc: need at least two entries");
  std::vector<std::optional<double>> out;
  for (size_t i = 1; i < errors.size(); ++i) {
    if (!(sizes[i - 1] > 0.0) || !(sizes[i] > 0.0) || sizes[i] == sizes[i - 1])
      throw ConfigurationError("compute_eoc: sizes must be positive and distinct");
    const double a = errors[i - 1], b = errors[i];
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
      out.emplace_back();
      continue;
    }
    out.emplace_back(std::log(a / b) / std::log(sizes[i] / sizes[i - 1]));
  }
  return out;
}

}  // namespace sbpwave::harness
