#include "pnpcli/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace pnpcli {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

const ConfigEntry* find_single(const ConfigSection& sec, const std::string& key) {
  const ConfigEntry* hit = nullptr;
  for (const auto& e : sec.entries)
    if (e.key == key) {
      if (hit) throw ConfigError("key given more than once", e.line, sec.name + "." + key);
      hit = &e;
    }
  return hit;
}

double parse_real(const ConfigSection& sec, const ConfigEntry& e, const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || tok.empty())
    throw ConfigError("expected a number, got '" + tok + "'", e.line, sec.name + "." + e.key);
  return v;
}

}  // namespace

bool ConfigSection::has(const std::string& key) const {
  for (const auto& e : entries)
    if (e.key == key) return true;
  return false;
}

std::string ConfigSection::get_string(const std::string& key) const {
  const ConfigEntry* e = find_single(*this, key);
  if (!e) throw ConfigError("missing required key", line, name + "." + key);
  return e->value;
}

std::string ConfigSection::get_string_or(const std::string& key, const std::string& fallback) const {
  const ConfigEntry* e = find_single(*this, key);
  return e ? e->value : fallback;
}

double ConfigSection::get_double(const std::string& key) const {
  const ConfigEntry* e = find_single(*this, key);
  if (!e) throw ConfigError("missing required key", line, name + "." + key);
  return parse_real(*this, *e, e->value);
}

double ConfigSection::get_double_or(const std::string& key, double fallback) const {
  const ConfigEntry* e = find_single(*this, key);
  return e ? parse_real(*this, *e, e->value) : fallback;
}

long ConfigSection::get_int(const std::string& key) const {
  const ConfigEntry* e = find_single(*this, key);
  if (!e) throw ConfigError("missing required key", line, name + "." + key);
  char* end = nullptr;
  const long v = std::strtol(e->value.c_str(), &end, 10);
  if (end != e->value.c_str() + e->value.size() || e->value.empty())
    throw ConfigError("expected an integer, got '" + e->value + "'", e->line, name + "." + key);
  return v;
}

long ConfigSection::get_int_or(const std::string& key, long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool ConfigSection::get_bool_or(const std::string& key, bool fallback) const {
  const ConfigEntry* e = find_single(*this, key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
  if (e->value == "false" || e->value == "0" || e->value == "no") return false;
  throw ConfigError("expected a boolean, got '" + e->value + "'", e->line, name + "." + key);
}

std::vector<double> ConfigSection::get_double_list(const std::string& key) const {
  const ConfigEntry* e = find_single(*this, key);
  if (!e) throw ConfigError("missing required key", line, name + "." + key);
  std::istringstream ls(e->value);
  std::vector<double> out;
  std::string tok;
  while (ls >> tok) out.push_back(parse_real(*this, *e, tok));
  if (out.empty()) throw ConfigError("expected a list of numbers", e->line, name + "." + key);
  return out;
}

std::vector<const ConfigEntry*> ConfigSection::all(const std::string& key) const {
  std::vector<const ConfigEntry*> out;
  for (const auto& e : entries)
    if (e.key == key) out.push_back(&e);
  return out;
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin = origin;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  ConfigSection* cur = nullptr;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", lineno);
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError("empty section name", lineno);
      cfg.sections.push_back(ConfigSection{name, lineno, {}});
      cur = &cfg.sections.back();
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", lineno);
    if (!cur) throw ConfigError("key before any [section]", lineno);
    ConfigEntry e;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = lineno;
    if (e.key.empty()) throw ConfigError("empty key", lineno);
    if (e.value.empty()) throw ConfigError("empty value", lineno, cur->name + "." + e.key);
    cur->entries.push_back(std::move(e));
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

const ConfigSection* Config::find(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

const ConfigSection& Config::require(const std::string& name) const {
  const ConfigSection* s = find(name);
  if (!s) throw ConfigError("missing required section [" + name + "] in " + origin);
  return *s;
}

}  // namespace pnpcli
