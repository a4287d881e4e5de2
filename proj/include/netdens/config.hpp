#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "netdens/errors.hpp"

namespace netdens {

// Flat `key = value` config format with `[section]` headers. '#' starts a
// comment, keys may repeat (each occurrence kept in order), values keep
// internal whitespace. Line numbers are tracked for error messages.
class KeyValueConfig {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static KeyValueConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open config file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
  }

  static KeyValueConfig parse_string(const std::string& text,
                                     const std::string& path = "<string>") {
    KeyValueConfig cfg;
    cfg.path_ = path;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      if (trimmed.front() == '[') {
        if (trimmed.back() != ']')
          throw ParseError(path, line_no, "unterminated section header");
        section = trim(trimmed.substr(1, trimmed.size() - 2));
        if (section.empty()) throw ParseError(path, line_no, "empty section name");
        cfg.sections_.push_back(section);
        continue;
      }
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw ParseError(path, line_no, "expected `key = value`");
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty()) throw ParseError(path, line_no, "empty key");
      if (value.empty()) throw ParseError(path, line_no, "empty value for key `" + key + "`");
      cfg.entries_[section + "." + key].push_back({value, line_no});
    }
    return cfg;
  }

  const std::string& path() const { return path_; }

  bool has(const std::string& section, const std::string& key) const {
    return entries_.count(section + "." + key) > 0;
  }

  // All values recorded for a repeated key, in file order.
  std::vector<Entry> values(const std::string& section, const std::string& key) const {
    const auto it = entries_.find(section + "." + key);
    if (it == entries_.end()) return {};
    return it->second;
  }

  std::string get_string(const std::string& section, const std::string& key) const {
    const auto it = entries_.find(section + "." + key);
    if (it == entries_.end())
      throw ParseError(path_, 0, "missing required key `" + key + "` in section [" +
                                     section + "]");
    return it->second.back().value;
  }

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
  }

  double get_double(const std::string& section, const std::string& key) const {
    return parse_double(section, key, get_string(section, key));
  }

  double get_double(const std::string& section, const std::string& key,
                    double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
  }

  std::uint64_t get_u64(const std::string& section, const std::string& key) const {
    const std::string v = get_string(section, key);
    try {
      std::size_t used = 0;
      const unsigned long long parsed = std::stoull(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return parsed;
    } catch (const std::exception&) {
      throw ParseError(path_, line_of(section, key),
                       "value of `" + key + "` is not an unsigned integer: " + v);
    }
  }

  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const {
    return has(section, key) ? get_u64(section, key) : fallback;
  }

  bool get_bool(const std::string& section, const std::string& key) const {
    std::string v = get_string(section, key);
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ParseError(path_, line_of(section, key),
                     "value of `" + key + "` is not a boolean: " + v);
  }

  bool get_bool(const std::string& section, const std::string& key, bool fallback) const {
    return has(section, key) ? get_bool(section, key) : fallback;
  }

  // Whitespace- or comma-separated list of numbers.
  std::vector<double> get_double_list(const std::string& section,
                                      const std::string& key) const {
    std::string v = get_string(section, key);
    std::replace(v.begin(), v.end(), ',', ' ');
    std::istringstream ss(v);
    std::vector<double> out;
    std::string tok;
    while (ss >> tok) out.push_back(parse_double(section, key, tok));
    if (out.empty())
      throw ParseError(path_, line_of(section, key), "empty list for key `" + key + "`");
    return out;
  }

  int line_of(const std::string& section, const std::string& key) const {
    const auto it = entries_.find(section + "." + key);
    return it == entries_.end() ? 0 : it->second.back().line;
  }

  // Typo guard: every present section.key must be expected.
  void require_known(const std::vector<std::string>& known_keys) const {
    for (const auto& [full_key, entries] : entries_) {
      if (std::find(known_keys.begin(), known_keys.end(), full_key) ==
          known_keys.end())
        throw ParseError(path_, entries.front().line,
                         "unknown config key `" + full_key + "`");
    }
  }

 private:
  static std::string trim(const std::string& s) {
    auto begin = s.begin();
    auto end = s.end();
    while (begin != end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
    while (end != begin && std::isspace(static_cast<unsigned char>(*(end - 1)))) --end;
    return std::string(begin, end);
  }

  double parse_double(const std::string& section, const std::string& key,
                      const std::string& v) const {
    if (v == "inf" || v == "infinity")
      return std::numeric_limits<double>::infinity();
    try {
      std::size_t used = 0;
      const double parsed = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return parsed;
    } catch (const std::exception&) {
      throw ParseError(path_, line_of(section, key),
                       "value of `" + key + "` is not a number: " + v);
    }
  }

  std::string path_;
  std::vector<std::string> sections_;
  std::map<std::string, std::vector<Entry>> entries_;
};

}  // namespace netdens
