#include "pnp/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "pnp/errors.hpp"

namespace pnp {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_csv_double(const std::string& s) {
  if (s.empty()) throw IoError(IoError::Kind::malformed_header, "empty CSV field");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    throw IoError(IoError::Kind::malformed_header, "bad CSV number: '" + s + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);  // binary: no newline translation, byte-stable
  if (!out) throw IoError(IoError::Kind::file_access, "cannot create " + path);
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out << (i ? "," : "") << table.header[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  if (!out) throw IoError(IoError::Kind::file_access, "short write to " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoError::Kind::file_access, "cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw IoError(IoError::Kind::malformed_header, path + ": empty CSV");
  t.header = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.rows.push_back(split_csv_line(line));
  }
  return t;
}

}  // namespace pnp
