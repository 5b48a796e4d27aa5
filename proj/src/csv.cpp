#include "z2lab/csv.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace z2lab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_line(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

}  // namespace

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const nlohmann::json& echo,
                     std::vector<std::string> columns)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc),
      n_columns_(columns.size()) {
  if (!out_) throw OutputError("cannot write " + path.string());
  out_ << "# config: " << echo.dump() << '\n';
  write_line(out_, columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != n_columns_) {
    throw std::logic_error("CSV row has " + std::to_string(cells.size()) +
                           " cells, header has " + std::to_string(n_columns_));
  }
  write_line(out_, cells);
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw OutputError("write failed for " + path_.string());
}

void write_csv(std::ostream& out, const nlohmann::json& echo,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  out << "# config: " << echo.dump() << '\n';
  write_line(out, columns);
  for (const auto& r : rows) write_line(out, r);
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("CSV has no column \"" + name + "\"");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw OutputError("cannot open " + path.string());
  CsvTable t;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.size() > 2 ? line.substr(2) : "");
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (header) {
      t.columns = std::move(cells);
      header = false;
    } else {
      if (cells.size() != t.columns.size()) {
        throw std::runtime_error(path.string() + ": row with " + std::to_string(cells.size()) +
                                 " cells under a " + std::to_string(t.columns.size()) +
                                 "-column header");
      }
      t.rows.push_back(std::move(cells));
    }
  }
  if (header) throw std::runtime_error(path.string() + ": no header line");
  return t;
}

}  // namespace z2lab
