#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sbpwave::harness {

/// 17 significant digits; "nan"/"inf" for non-finite values.
std::string cell(double v);
/// Empty cell for nullopt.
std::string cell(std::optional<double> v);
std::string cell(long v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> row);
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  /// Column index by name; throws when absent.
  std::size_t column(const std::string& name) const;

  void write(std::ostream& os) const;
  void save(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Header plus rows; fields must not contain commas or quotes.
CsvTable read_csv(std::istream& is);

}  // namespace sbpwave::harness
