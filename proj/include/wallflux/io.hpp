#pragma once

// Delimited text exports: header row, data rows, then "# key=value" footer lines.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace wallflux::io {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;  // all the same length
  std::vector<std::pair<std::string, std::string>> footer;

  void add_footer(const std::string& key, double value);
  void add_footer(const std::string& key, const std::string& value);
};

/// Shortest round-trip decimal representation.
std::string format_number(double x);

void write(std::ostream& out, const Table& table);
void write(const std::filesystem::path& path, const Table& table);

}  // namespace wallflux::io
