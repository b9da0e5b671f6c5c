#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace chisup {

// Flat `key = value` configuration. `#`-prefixed lines are comments, except
// that a comment whose remainder parses as `key = value` with a known key is
// treated as an assignment; this lets a resolved-config CSV header be fed
// back verbatim as a config file.
class Config {
 public:
  static Config parse_text(const std::string& text, const std::set<std::string>& known_keys);
  static Config parse_file(const std::string& path, const std::set<std::string>& known_keys);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::vector<double> get_list(const std::string& key) const;  // comma separated

  // Resolved assignments in insertion order, as `key = value` lines.
  std::vector<std::string> lines() const;

 private:
  std::vector<std::string> order_;
  std::map<std::string, std::string> kv_;
};

std::string format_double(double v);

}  // namespace chisup
