#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dmx::csv {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

/// Rows of already-formatted cells under a fixed header.
class Table {
 public:
  explicit Table(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  std::string to_string() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Reads a comma-separated file with a header line. Throws ConfigError.
Table read(const std::filesystem::path& path);

/// Index of `name` in the header or -1.
int column(const Table& table, const std::string& name);

}  // namespace dmx::csv
