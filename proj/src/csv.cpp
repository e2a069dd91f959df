#include "dmx/csv.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "dmx/errors.hpp"

namespace dmx::csv {

std::string format_number(double v) { return fmt::format("{}", v); }

Table::Table(std::vector<std::string> header) : header_(std::move(header)) {}

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw ContractViolation(
        fmt::format("CSV row has {} cells, header has {}", cells.size(), header_.size()));
  }
  rows_.push_back(std::move(cells));
}

std::string Table::to_string() const {
  std::string out;
  auto append_line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  append_line(header_);
  for (const auto& row : rows_) append_line(row);
  return out;
}

void Table::write(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(fmt::format("cannot open {} for writing", path.string()));
  os << to_string();
  if (!os) throw Error(fmt::format("failed writing {}", path.string()));
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

Table read(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError(fmt::format("cannot open {}", path.string()));
  std::string line;
  if (!std::getline(is, line)) throw ConfigError(fmt::format("{} is empty", path.string()));
  if (!line.empty() && line.back() == '\r') line.pop_back();
  Table table(split(line));
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != table.header().size()) {
      throw ConfigError(fmt::format("{}:{}: expected {} cells, found {}", path.string(), lineno,
                                    table.header().size(), cells.size()));
    }
    table.add_row(std::move(cells));
  }
  return table;
}

int column(const Table& table, const std::string& name) {
  const auto& h = table.header();
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i] == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace dmx::csv
