#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace proofgauge {

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // every row has columns.size() fields
};

// Reads a comma-separated file and checks the header verbatim. Fields written
// by this project never contain commas, quotes or newlines, so no quoting
// rules apply. Malformed rows are reported with their line number.
CsvTable read_csv(const std::filesystem::path& path, const std::string& expected_header);

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows);

// Shortest representation that round-trips the exact double value.
std::string format_double(double value);

// Fixed-point display forms used in tables and console summaries.
std::string format_fixed(double value, int digits);

double parse_double(const std::string& text, const std::string& context);
long parse_long(const std::string& text, const std::string& context);

}  // namespace proofgauge
