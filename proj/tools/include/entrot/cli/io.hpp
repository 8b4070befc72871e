#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace entrot::cli {

using Json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Parse errors are reported as "path:line:column: message".
Json parse_json_file(const std::filesystem::path& path);

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);

/// Numbers as JSON values, with non-finite values as null.
Json number_or_null(double v);

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(const std::vector<double>& row);
  std::size_t size() const { return rows_.size(); }
  std::string csv() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

/// Numeric CSV with a header line. Errors carry "path:line".
struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
};

CsvData read_csv(const std::filesystem::path& path);

}  // namespace entrot::cli
