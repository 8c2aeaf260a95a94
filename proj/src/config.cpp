#include "proofgauge/config.hpp"

#include <fstream>

#include "proofgauge/csv.hpp"
#include "proofgauge/errors.hpp"

namespace proofgauge {

namespace {

std::string trim(const std::string& text) {
  std::size_t begin = text.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  std::size_t end = text.find_last_not_of(" \t");
  return text.substr(begin, end - begin + 1);
}

}  // namespace

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());

  RunConfig config;
  std::string line;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t equals = stripped.find('=');
    if (equals == std::string::npos)
      throw ValidationError(path.string() + ":" + std::to_string(line_number) +
                            ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, equals));
    const std::string value = trim(stripped.substr(equals + 1));
    if (key.empty())
      throw ValidationError(path.string() + ":" + std::to_string(line_number) +
                            ": empty key");
    if (config.values_.count(key))
      throw ValidationError(path.string() + ":" + std::to_string(line_number) +
                            ": duplicate key '" + key + "'");
    config.values_[key] = value;
  }
  return config;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) != 0; }

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  return parse_double(it->second, "config key '" + key + "'");
}

long RunConfig::get_long(const std::string& key, long fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  return parse_long(it->second, "config key '" + key + "'");
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& value = it->second;
  if (value == "true" || value == "1" || value == "on" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "off" || value == "no") return false;
  throw ValidationError("config key '" + key + "': bad boolean '" + value + "'");
}

std::string RunConfig::require_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end() || it->second.empty())
    throw ValidationError("config key '" + key + "' is required");
  return it->second;
}

}  // namespace proofgauge
