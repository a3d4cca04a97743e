#include "csvio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cli {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const Table& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "# gcnse-csv v1\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << row[i];
    out << "\n";
  }
  if (!out) throw std::runtime_error("short write on " + path);
}

std::string to_json(const Table& t) {
  std::ostringstream out;
  out << "[";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out << (r ? ",\n " : "\n ") << "{";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      const std::string& cell = t.rows[r][i];
      out << (i ? "," : "") << "\"" << t.columns[i] << "\":";
      // numbers unquoted, everything else quoted
      char* end = nullptr;
      std::strtod(cell.c_str(), &end);
      bool numeric = !cell.empty() && end && *end == '\0';
      if (numeric) out << cell;
      else out << "\"" << cell << "\"";
    }
    out << "}";
  }
  out << "\n]\n";
  return out.str();
}

int CsvFile::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

CsvFile read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  CsvFile f;
  std::string line;
  bool have_header = false;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
      if (ch == ',') {
        out.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur.push_back(ch);
      }
    }
    out.push_back(cur);
    return out;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!have_header) {
      f.columns = split(line);
      have_header = true;
    } else {
      f.rows.push_back(split(line));
    }
  }
  if (!have_header) throw std::runtime_error(path + ": no header row");
  return f;
}

} // namespace cli
