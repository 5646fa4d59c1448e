#include "talab/config.hpp"

#include <fstream>
#include <istream>
#include <set>

namespace talab {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

Config parse_config(std::istream& in) {
  Config cfg;
  std::set<std::string> ids;
  ScenarioSpec* current = nullptr;
  bool in_global = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(lineno, "unterminated section header");
      std::string name = t.substr(1, t.size() - 2);
      if (name == "global") {
        in_global = true;
        current = nullptr;
        continue;
      }
      if (name.rfind("scenario.", 0) != 0)
        throw ConfigError(lineno, "unknown section '" + name + "' (expected [scenario.<id>])");
      std::string id = name.substr(9);
      if (id.empty()) throw ConfigError(lineno, "empty scenario id");
      if (!ids.insert(id).second) throw ConfigError(lineno, "duplicate scenario id '" + id + "'");
      cfg.scenarios.push_back({});
      current = &cfg.scenarios.back();
      current->id = id;
      in_global = false;
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(lineno, "expected 'key = value'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError(lineno, "empty key");
    if (in_global) {
      cfg.global[key] = value;
      continue;
    }
    if (!current) throw ConfigError(lineno, "key outside of any section");
    if (key == "target") {
      current->target = value;
    } else if (key == "seed") {
      try {
        current->seed = std::stoull(value);
      } catch (const std::exception&) {
        throw ConfigError(lineno, "seed is not an unsigned integer");
      }
    } else if (key == "out") {
      current->out = value;
    } else {
      if (!current->params.insert({key, value}).second)
        throw ConfigError(lineno, "duplicate key '" + key + "'");
    }
  }
  for (std::size_t k = 0; k < cfg.scenarios.size(); ++k)
    if (cfg.scenarios[k].target.empty())
      throw ConfigError(0, "scenario '" + cfg.scenarios[k].id + "' has no target");
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in);
}

}  // namespace talab
