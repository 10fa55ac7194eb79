#include "frontier_lab/csv_io.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace frontier_lab {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double x = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return x;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path), path_(path) {
  if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (const auto& h : header) field(h);
  end_row();
}

void CsvWriter::separator() {
  if (!first_in_row_) out_ << ',';
  first_in_row_ = false;
}

CsvWriter& CsvWriter::field(std::string_view s) {
  separator();
  out_ << s;
  return *this;
}

CsvWriter& CsvWriter::field(double x) { return field(std::string_view(format_double(x))); }

CsvWriter& CsvWriter::field(long long x) {
  separator();
  out_ << x;
  return *this;
}

CsvWriter& CsvWriter::field(unsigned long long x) {
  separator();
  out_ << x;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  first_in_row_ = true;
  if (!out_) throw std::runtime_error("write failed: " + path_.string());
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::runtime_error("csv: missing column '" + std::string(name) + "'");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(table.header.size()) + " fields, got " +
                               std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (table.header.empty()) throw std::runtime_error(path.string() + ": missing header row");
  return table;
}

}  // namespace frontier_lab
