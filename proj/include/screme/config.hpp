#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace screme::config {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Line-oriented "section.key = value" text; '#' starts a comment. Every key
// must be consumed by the subcommand that runs, otherwise the run is
// rejected (typo protection).
class Config {
 public:
  Config() = default;
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& def) const;
  double get_double_or(const std::string& key, double def) const;
  uint64_t get_u64_or(const std::string& key, uint64_t def) const;
  int get_int_or(const std::string& key, int def) const;
  bool get_bool_or(const std::string& key, bool def) const;
  std::vector<std::string> get_list_or(const std::string& key,
                                       const std::vector<std::string>& def) const;

  void reject_unconsumed() const;
  uint64_t content_hash() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
};

std::vector<std::string> split_list(const std::string& value, char sep = ',');

}  // namespace screme::config
