#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace z2lab {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest text that round-trips ("%.17g"), "nan"/"inf" for non-finite.
std::string format_double(double v);

/// CSV file whose first line is "# config: <echo JSON>".
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const nlohmann::json& echo,
            std::vector<std::string> columns);
  void row(const std::vector<std::string>& cells);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t n_columns_;
};

/// Same layout written to a stream (stdout for CLI subcommands).
void write_csv(std::ostream& out, const nlohmann::json& echo,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);

struct CsvTable {
  std::vector<std::string> comments;  // without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
};

/// Plain comma-separated reader (no quoting); '#' lines are comments.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace z2lab
