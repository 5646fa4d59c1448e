#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace talab {

/// Parse failure with the offending line number.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error(message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ScenarioSpec {
  std::string id;
  std::string target;  // builtin scenario name
  std::map<std::string, std::string> params;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

struct Config {
  std::map<std::string, std::string> global;  // [global] section
  std::vector<ScenarioSpec> scenarios;        // in file order
};

// Flat key-value format: "[scenario.<id>]" headers, "key = value" lines,
// '#' comments, an optional "[global]" section. Scenario ids must be
// unique; every scenario needs a "target" key.
Config parse_config(std::istream& in);
Config parse_config_file(const std::string& path);

}  // namespace talab
