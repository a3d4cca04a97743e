#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

} // namespace

Config parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  Config cfg;
  std::string line;
  int lineno = 0;
  std::vector<ConfigEntry>* current = nullptr;
  std::string current_name;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']')
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": unterminated section header");
      current_name = trim(text.substr(1, text.size() - 2));
      if (current_name.empty())
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": empty section name");
      cfg.sections.emplace_back(current_name, std::vector<ConfigEntry>{});
      current = &cfg.sections.back().second;
      continue;
    }
    std::size_t eq = text.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected `key = value`");
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": empty key");
    if (!current)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": `" + key + "` appears before any [section]");
    for (const auto& e : *current)
      if (e.key == key)
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": duplicate key `" + key + "` in [" +
                                 current_name + "] (first at line " +
                                 std::to_string(e.line) + ")");
    current->push_back({key, value, lineno});
  }
  return cfg;
}

int edit_distance(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string suggest(const std::string& key,
                    const std::vector<std::string>& candidates) {
  int best = 3;
  std::string pick;
  for (const auto& c : candidates) {
    int d = edit_distance(key, c);
    if (d < best) {
      best = d;
      pick = c;
    }
  }
  return pick;
}

} // namespace cli
