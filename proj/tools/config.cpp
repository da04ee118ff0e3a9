#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <climits>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string_view>
#include <utility>
#include <vector>

namespace dtebell_cli {

namespace {

// Everything the tool understands. A key listed here is legal in its
// section; anything else is a config error so typos cannot silently fall
// back to defaults.
const std::map<std::string, std::vector<std::string>> kSchema = {
    {"scenario",
     {"mass", "v_rel", "sigma_p_cm", "sigma_p_rel", "tau", "phi_tau"}},
    {"quadrature", {"tolerance", "max_depth", "rule_points", "max_panels"}},
    {"tbe",
     {"phi_tau", "theta1", "theta2", "phi1_start", "phi1_stop", "phi1_count",
      "phi2_start", "phi2_stop", "phi2_count"}},
    {"fringe", {"ell2", "ell1_start", "ell1_stop", "ell1_count", "engine"}},
    {"chsh",
     {"mode", "phi_tau", "use_maximal", "a", "a_prime", "b", "b_prime",
      "optimize", "engine"}},
    {"validate", {"draws", "seed", "tolerance"}},
    {"conditions", {"threshold"}},
    {"output", {"path", "format"}},
};

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  while (end > begin &&
         std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  return std::string(text.substr(begin, end - begin));
}

bool is_comment_or_empty(const std::string& line) {
  return line.empty() || line.front() == '#' || line.front() == ';';
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream input(path);
  if (!input) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << input.rdbuf();
  return parse_text(buffer.str(), path);
}

ConfigFile ConfigFile::parse_text(const std::string& text,
                                  const std::string& origin) {
  ConfigFile config;
  config.origin_ = origin;
  std::istringstream stream(text);
  std::string raw_line;
  std::string section;
  int line_number = 0;
  while (std::getline(stream, raw_line)) {
    ++line_number;
    const std::string line = trim(raw_line);
    if (is_comment_or_empty(line)) {
      continue;
    }
    const std::string where =
        origin + ":" + std::to_string(line_number) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(where + "malformed section header: " + line);
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!kSchema.count(section)) {
        throw ConfigError(where + "unknown section [" + section + "]");
      }
      config.sections_[section];  // empty sections are allowed
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + "expected key = value, got: " + line);
    }
    if (section.empty()) {
      throw ConfigError(where + "key outside of any section: " + line);
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(where + "empty key");
    }
    const auto& allowed = kSchema.at(section);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + "unknown key '" + key + "' in section [" +
                        section + "]");
    }
    auto [it, inserted] = config.sections_[section].emplace(key, value);
    (void)it;
    if (!inserted) {
      throw ConfigError(where + "duplicate key '" + key + "' in section [" +
                        section + "]");
    }
  }
  return config;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return lookup(section, key).has_value();
}

std::optional<std::string> ConfigFile::lookup(const std::string& section,
                                              const std::string& key) const {
  const auto section_it = sections_.find(section);
  if (section_it == sections_.end()) {
    return std::nullopt;
  }
  const auto key_it = section_it->second.find(key);
  if (key_it == section_it->second.end()) {
    return std::nullopt;
  }
  return key_it->second;
}

std::string ConfigFile::get_string(const std::string& section,
                                   const std::string& key) const {
  const auto value = lookup(section, key);
  if (!value) {
    throw ConfigError(origin_ + ": missing required key '" + key +
                      "' in section [" + section + "]");
  }
  return *value;
}

double ConfigFile::get_double(const std::string& section,
                              const std::string& key) const {
  const std::string text = get_string(section, key);
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError(origin_ + ": [" + section + "] " + key +
                      " is not a number: " + text);
  }
  return value;
}

int ConfigFile::get_int(const std::string& section,
                        const std::string& key) const {
  const std::string text = get_string(section, key);
  errno = 0;
  char* end = nullptr;
  const long value = std::strtol(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE ||
      value < INT_MIN || value > INT_MAX) {
    throw ConfigError(origin_ + ": [" + section + "] " + key +
                      " is not an integer: " + text);
  }
  return static_cast<int>(value);
}

std::uint64_t ConfigFile::get_uint64(const std::string& section,
                                     const std::string& key) const {
  const std::string text = get_string(section, key);
  errno = 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE ||
      text.front() == '-') {
    throw ConfigError(origin_ + ": [" + section + "] " + key +
                      " is not an unsigned integer: " + text);
  }
  return static_cast<std::uint64_t>(value);
}

bool ConfigFile::get_bool(const std::string& section,
                          const std::string& key) const {
  const std::string text = get_string(section, key);
  if (text == "true" || text == "1" || text == "yes" || text == "on") {
    return true;
  }
  if (text == "false" || text == "0" || text == "no" || text == "off") {
    return false;
  }
  throw ConfigError(origin_ + ": [" + section + "] " + key +
                    " is not a boolean: " + text);
}

double ConfigFile::get_double_or(const std::string& section,
                                 const std::string& key,
                                 double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

int ConfigFile::get_int_or(const std::string& section, const std::string& key,
                           int fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::uint64_t ConfigFile::get_uint64_or(const std::string& section,
                                        const std::string& key,
                                        std::uint64_t fallback) const {
  return has(section, key) ? get_uint64(section, key) : fallback;
}

bool ConfigFile::get_bool_or(const std::string& section,
                             const std::string& key, bool fallback) const {
  return has(section, key) ? get_bool(section, key) : fallback;
}

std::string ConfigFile::get_string_or(const std::string& section,
                                      const std::string& key,
                                      const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

void ConfigFile::require_section(const std::string& section) const {
  if (!sections_.count(section)) {
    throw ConfigError(origin_ + ": missing required section [" + section +
                      "]");
  }
}

}  // namespace dtebell_cli
