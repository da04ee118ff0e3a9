#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace dtebell_cli {

// Raised for any malformed, unknown, or out-of-range configuration input;
// the driver maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Strict section/key=value configuration file. Comments start with '#' or
// ';'. Unknown sections, unknown keys, duplicate keys and keys outside any
// section are all rejected.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_text(const std::string& text,
                               const std::string& origin = "<config>");

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section,
                         const std::string& key) const;
  double get_double(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key) const;
  std::uint64_t get_uint64(const std::string& section,
                           const std::string& key) const;
  bool get_bool(const std::string& section, const std::string& key) const;

  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  int get_int_or(const std::string& section, const std::string& key,
                 int fallback) const;
  std::uint64_t get_uint64_or(const std::string& section,
                              const std::string& key,
                              std::uint64_t fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key,
                   bool fallback) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;

  // Requires the section to be present (used for per-command mandatory
  // sections like [scenario]).
  void require_section(const std::string& section) const;

 private:
  std::optional<std::string> lookup(const std::string& section,
                                    const std::string& key) const;

  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::string origin_;
};

}  // namespace dtebell_cli
