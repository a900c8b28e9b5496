#include "sbpwave/operator_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace sbpwave {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix_csv(std::ostream& os, const Matrix& a) {
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j > 0) os << ',';
      os << format_double(a(i, j));
    }
    os << '\n';
  }
}

void save_matrix_csv(const std::string& path, const Matrix& a) {
  std::ofstream os(path);
  if (!os) throw ConfigurationError("cannot open '" + path + "' for writing");
  write_matrix_csv(os, a);
}

Matrix read_matrix_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size())
      throw ConfigurationError("matrix CSV: ragged rows");
    rows.push_back(std::move(row));
  }
  Matrix a(static_cast<Index>(rows.size()), rows.empty() ? 0 : static_cast<Index>(rows[0].size()));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) a(i, j) = rows[i][j];
  return a;
}

Matrix load_matrix_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigurationError("cannot open '" + path + "'");
  return read_matrix_csv(is);
}

}  // namespace sbpwave
