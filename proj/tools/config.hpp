#pragma once

#include <map>
#include <string>
#include <vector>

namespace cli {

// Plain-text configuration: `key = value` lines grouped under `[command]`
// sections, `#` starts a comment. Keys mirror the long option names of the
// section's command. Command-line flags override file values.
struct ConfigEntry {
  std::string key;
  std::string value;
  int line;
};

struct Config {
  // section name -> entries in file order
  std::vector<std::pair<std::string, std::vector<ConfigEntry>>> sections;
};

// Throws std::runtime_error with a line number on malformed lines or
// duplicate keys within one section.
Config parse_config(const std::string& path);

// Levenshtein distance, used for the "did you mean" hint on unknown keys.
int edit_distance(const std::string& a, const std::string& b);

// Best suggestion among candidates with distance <= 2, or empty.
std::string suggest(const std::string& key,
                    const std::vector<std::string>& candidates);

} // namespace cli
