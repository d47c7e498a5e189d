#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pnpcli {

// Configuration problems carry the offending line and field so the CLI can
// print actionable messages.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line = 0, std::string field = "")
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) +
                                          (field.empty() ? "" : " (" + field + ")") + ": " + msg
                                    : (field.empty() ? msg : field + ": " + msg)),
        line_(line),
        field_(std::move(field)) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

// Flat typed key-value format:
//   # comment                     (whole-line comments only)
//   [section]
//   key = value                   (value runs to end of line, trimmed)
// Keys may repeat within a section (e.g. mixture components accumulate).
struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct ConfigSection {
  std::string name;
  int line = 0;
  std::vector<ConfigEntry> entries;

  bool has(const std::string& key) const;
  // single-occurrence accessors; missing/duplicate/badly-typed values throw
  // ConfigError naming the section.key and line
  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long get_int(const std::string& key) const;
  long get_int_or(const std::string& key, long fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
  // whitespace-separated list of reals
  std::vector<double> get_double_list(const std::string& key) const;
  // every value for a repeated key, in file order
  std::vector<const ConfigEntry*> all(const std::string& key) const;
};

struct Config {
  std::string origin;  // path, for messages
  std::vector<ConfigSection> sections;

  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin);

  const ConfigSection* find(const std::string& name) const;
  const ConfigSection& require(const std::string& name) const;
};

}  // namespace pnpcli
