#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace onevstwo {

// Shortest decimal string that parses back to the same double, capped at 12
// significant digits; keeps CSV output diff-friendly and deterministic.
std::string format_csv_value(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Comma separators, LF line endings, header row first.
void write_csv(const CsvTable& table, std::ostream& out);
void write_csv_file(const CsvTable& table, const std::string& path);

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

}  // namespace onevstwo
