#pragma once

// Minimal CSV: header row, comma separator, '.' decimals, LF line endings.
// Fields never contain commas or quotes, so no quoting is performed.

#include <iosfwd>
#include <string>
#include <vector>

namespace mtd {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws std::out_of_range
  double number(std::size_t row, const std::string& name) const;
};

/// Shortest text that parses back to exactly `value`.
std::string format_number(double value);
double parse_number(const std::string& text);

void write_csv(std::ostream& out, const CsvTable& table);
/// Throws std::runtime_error on ragged rows or CR line endings.
CsvTable read_csv(std::istream& in);

}  // namespace mtd
