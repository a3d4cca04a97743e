#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cli {

// One output row; cells are pre-formatted strings so numeric formatting is
// deterministic (%.17g via format_double).
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string format_double(double v);

// Writes "# gcnse-csv v1" then the header then the rows.
void write_csv(const Table& t, const std::string& path);
std::string to_json(const Table& t);

// Reader used by the plot command: skips '#' comment lines, returns header +
// string cells.
struct CsvFile {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  int column(const std::string& name) const; // -1 if absent
};
CsvFile read_csv(const std::string& path);

} // namespace cli
