#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace proofgauge {

// Flat dotted-key configuration: one `key = value` pair per line, `#` starts
// a comment, blank lines ignored. Values keep inner whitespace but are
// trimmed at both ends. Unknown keys are rejected by commands, not here.
class RunConfig {
 public:
  static RunConfig load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Throws ValidationError naming the key when absent.
  std::string require_string(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace proofgauge
