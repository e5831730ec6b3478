#include "mtd/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace mtd {

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("no CSV column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  return parse_number(rows.at(row).at(column(name)));
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // also folds -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, ptr);
}

double parse_number(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw std::runtime_error("not a number: '" + text + "'");
  return v;
}

namespace {

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << fields[i];
  }
  out << '\n';
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out(1);
  for (char c : line) {
    if (c == ',') out.emplace_back();
    else out.back() += c;
  }
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const CsvTable& table) {
  write_row(out, table.header);
  for (const auto& row : table.rows) write_row(out, row);
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') throw std::runtime_error("CSV uses CRLF line endings");
    auto fields = split_row(line);
    if (first) {
      table.header = std::move(fields);
      first = false;
      continue;
    }
    if (fields.size() != table.header.size()) throw std::runtime_error("ragged CSV row: " + line);
    table.rows.push_back(std::move(fields));
  }
  if (first) throw std::runtime_error("CSV has no header");
  return table;
}

}  // namespace mtd
