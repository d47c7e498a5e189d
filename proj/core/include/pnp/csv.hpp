#pragma once

#include <string>
#include <vector>

namespace pnp {

// 17 significant digits: enough for decimal text to round-trip any finite
// double bit-exactly, which the golden-file tests rely on.
std::string format_g17(double v);

// Strict double parse; throws IoError(malformed_header) on garbage.
double parse_csv_double(const std::string& s);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace pnp
