#include "sbpwave/harness/csv.hpp"

#include "sbpwave/core.hpp"
#include "sbpwave/operator_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sbpwave::harness {

std::string cell(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

std::string cell(std::optional<double> v) { return v ? cell(*v) : std::string(); }

std::string cell(long v) { return std::to_string(v); }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw ConfigurationError("csv: header must not be empty");
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size())
    throw ConfigurationError("csv: row has " + std::to_string(row.size()) + " fields, header has " +
                             std::to_string(header_.size()));
  rows_.push_back(std::move(row));
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return i;
  throw ConfigurationError("csv: no column '" + name + "'");
}

namespace {

void write_line(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << fields[i];
  }
  os << '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void CsvTable::write(std::ostream& os) const {
  write_line(os, header_);
  for (const auto& r : rows_) write_line(os, r);
}

void CsvTable::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigurationError("csv: cannot write " + path);
  write(out);
}

CsvTable read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.empty()) throw ConfigurationError("csv: empty input");
  CsvTable t(split(line));
  while (std::getline(is, line))
    if (!line.empty()) t.add_row(split(line));
  return t;
}

}  // namespace sbpwave::harness
