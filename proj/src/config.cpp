#include "screme/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace screme::config {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '_' && c != '-')
      return false;
  }
  return true;
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_string(ss.str());
}

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (!valid_key(key))
      throw ConfigError("config line " + std::to_string(line_no) + ": bad key '" + key + "'");
    if (cfg.values_.count(key))
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

std::optional<std::string> Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  consumed_.insert(key);
  return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& def) const {
  auto v = get(key);
  return v ? *v : def;
}

double Config::get_double_or(const std::string& key, double def) const {
  auto v = get(key);
  if (!v) return def;
  try {
    size_t pos = 0;
    double d = std::stod(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + *v + "'");
  }
}

uint64_t Config::get_u64_or(const std::string& key, uint64_t def) const {
  auto v = get(key);
  if (!v) return def;
  uint64_t out = 0;
  auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || p != v->data() + v->size())
    throw ConfigError("config key '" + key + "': expected an unsigned integer, got '" + *v + "'");
  return out;
}

int Config::get_int_or(const std::string& key, int def) const {
  auto v = get(key);
  if (!v) return def;
  int out = 0;
  auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || p != v->data() + v->size())
    throw ConfigError("config key '" + key + "': expected an integer, got '" + *v + "'");
  return out;
}

bool Config::get_bool_or(const std::string& key, bool def) const {
  auto v = get(key);
  if (!v) return def;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + *v + "'");
}

std::vector<std::string> Config::get_list_or(const std::string& key,
                                             const std::vector<std::string>& def) const {
  auto v = get(key);
  if (!v) return def;
  return split_list(*v);
}

void Config::reject_unconsumed() const {
  std::vector<std::string> unknown;
  for (const auto& [k, v] : values_) {
    if (consumed_.count(k)) continue;
    unknown.push_back(k);
  }
  if (!unknown.empty()) {
    std::string msg = "unknown config key(s):";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }
}

uint64_t Config::content_hash() const {
  uint64_t h = 1469598103934665603ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& [k, v] : values_) {
    feed(k);
    feed("=");
    feed(v);
    feed("\n");
  }
  return h;
}

std::vector<std::string> split_list(const std::string& value, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(value);
  while (std::getline(in, cur, sep)) {
    std::string t = trim(cur);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

}  // namespace screme::config
