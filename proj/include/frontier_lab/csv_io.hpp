#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace frontier_lab {

/// Shortest decimal text that round-trips the double exactly.
std::string format_double(double x);

/// Exact inverse of format_double, subnormals included. Throws
/// std::invalid_argument on anything that is not a complete number.
double parse_double(std::string_view text);

/// Line-oriented CSV writer. Fields are written verbatim; none of the lab's
/// schemas contain commas or quotes.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  CsvWriter& field(std::string_view s);
  CsvWriter& field(double x);
  CsvWriter& field(long long x);
  CsvWriter& field(unsigned long long x);
  CsvWriter& field(int x) { return field(static_cast<long long>(x)); }
  CsvWriter& field(unsigned x) { return field(static_cast<unsigned long long>(x)); }
  CsvWriter& field(unsigned long x) { return field(static_cast<unsigned long long>(x)); }
  CsvWriter& field(long x) { return field(static_cast<long long>(x)); }
  void end_row();

 private:
  void separator();

  std::ofstream out_;
  std::filesystem::path path_;
  bool first_in_row_ = true;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws std::runtime_error if absent.
  std::size_t column(std::string_view name) const;
};

/// Reads a headered CSV; throws std::runtime_error naming file and line on
/// ragged rows or unreadable files.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace frontier_lab
