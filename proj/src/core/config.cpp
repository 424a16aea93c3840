#include "core/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace difflab {

namespace {
std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}
}  // namespace

Config Config::parse(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      c.data_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    c.data_[section][key] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto s = data_.find(section);
  return s != data_.end() && s->second.count(key) > 0;
}

std::string Config::get_str(const std::string& section, const std::string& key) const {
  auto s = data_.find(section);
  if (s == data_.end() || !s->second.count(key))
    throw ConfigError("config: missing [" + section + "] " + key);
  return s->second.at(key);
}

std::string Config::get_str(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
  return has(section, key) ? get_str(section, key) : fallback;
}

double Config::get_num(const std::string& section, const std::string& key) const {
  const std::string v = get_str(section, key);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config: [" + section + "] " + key + " = '" + v + "' is not a number");
  return x;
}

double Config::get_num(const std::string& section, const std::string& key,
                       double fallback) const {
  return has(section, key) ? get_num(section, key) : fallback;
}

int64_t Config::get_int(const std::string& section, const std::string& key) const {
  const double x = get_num(section, key);
  const int64_t i = static_cast<int64_t>(x);
  if (static_cast<double>(i) != x)
    throw ConfigError("config: [" + section + "] " + key + " must be an integer");
  return i;
}

int64_t Config::get_int(const std::string& section, const std::string& key,
                        int64_t fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get_str(section, key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: [" + section + "] " + key + " must be a boolean");
}

std::vector<double> Config::get_list(const std::string& section,
                                     const std::string& key) const {
  const std::string v = get_str(section, key);
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    char* end = nullptr;
    out.push_back(std::strtod(item.c_str(), &end));
    if (end == item.c_str() || *end != '\0')
      throw ConfigError("config: [" + section + "] " + key + ": bad list entry '" + item +
                        "'");
  }
  if (out.empty())
    throw ConfigError("config: [" + section + "] " + key + " is an empty list");
  return out;
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
  return has(section, key) ? get_list(section, key) : fallback;
}

std::vector<std::string> Config::get_str_list(const std::string& section,
                                              const std::string& key) const {
  const std::string v = get_str(section, key);
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string Config::resolved_text() const {
  std::string out;
  for (const auto& [section, kv] : data_) {
    out += "[" + section + "]\n";
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  }
  return out;
}

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
  data_[section][key] = value;
}

}  // namespace difflab
