#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

// Grid syntax: "start:stop:step" (inclusive of stop up to rounding) or a
// comma-separated list "0.1,1,10". A bare number is a one-point grid.
inline std::vector<double> parse_grid(const std::string& spec) {
  auto to_double = [&](const std::string& tok) {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size())
      throw std::runtime_error("bad number '" + tok + "' in grid '" + spec + "'");
    return v;
  };
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= spec.size(); ++i) {
      if (i == spec.size() || spec[i] == ':') {
        parts.push_back(spec.substr(start, i - start));
        start = i + 1;
      }
    }
    if (parts.size() != 3)
      throw std::runtime_error("grid '" + spec + "' must be start:stop:step");
    double lo = to_double(parts[0]), hi = to_double(parts[1]),
           step = to_double(parts[2]);
    if (step <= 0.0) throw std::runtime_error("grid step must be > 0");
    long count = std::lround((hi - lo) / step);
    if (count < 0) throw std::runtime_error("empty grid '" + spec + "'");
    for (long i = 0; i <= count; ++i) {
      double v = lo + step * i;
      if (v > hi + 1e-9 * std::fabs(step)) break;
      out.push_back(v);
    }
    return out;
  }
  std::size_t start = 0;
  for (std::size_t i = 0; i <= spec.size(); ++i) {
    if (i == spec.size() || spec[i] == ',') {
      std::string tok = spec.substr(start, i - start);
      if (!tok.empty()) out.push_back(to_double(tok));
      start = i + 1;
    }
  }
  if (out.empty()) throw std::runtime_error("empty grid '" + spec + "'");
  return out;
}

} // namespace cli
