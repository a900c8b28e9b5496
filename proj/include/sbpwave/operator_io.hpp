#pragma once

#include "sbpwave/core.hpp"

#include <iosfwd>
#include <string>

namespace sbpwave {

/// Formats a double with 17 significant digits.
std::string format_double(double v);

/// Row-major CSV, one matrix row per line, 17 significant digits.
void write_matrix_csv(std::ostream& os, const Matrix& a);
void save_matrix_csv(const std::string& path, const Matrix& a);
Matrix read_matrix_csv(std::istream& is);
Matrix load_matrix_csv(const std::string& path);

}  // namespace sbpwave
