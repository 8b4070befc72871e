#include "entrot/cli/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "entrot/common.hpp"

namespace entrot::cli {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(tmp.string() + ": cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw Error(tmp.string() + ": write failed");
  }
  fs::rename(tmp, path);
}

Json parse_json_file(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') ++line, col = 1;
      else ++col;
    }
    std::string msg = e.what();
    // nlohmann prefixes "[json.exception.parse_error.101] parse error at line L, column C: "
    if (const auto p = msg.find(": "); p != std::string::npos) msg = msg.substr(p + 2);
    throw Error(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void Table::add(const std::vector<double>& row) {
  require(row.size() == header_.size(), "table row width does not match header");
  rows_.push_back(row);
}

std::string Table::csv() const {
  std::string out;
  for (std::size_t k = 0; k < header_.size(); ++k) out += (k ? "," : "") + header_[k];
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += format_number(row[k]);
    }
    out += '\n';
  }
  return out;
}

std::size_t CsvData::column(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k)
    if (header[k] == name) return k;
  throw Error("missing column '" + name + "'");
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

double parse_cell(const std::string& s, const std::string& where) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw Error(where + ": not a number: '" + s + "'");
  return v;
}

}  // namespace

CsvData read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(path.string() + ": cannot open");
  CsvData data;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (data.header.empty()) {
      data.header = cells;
      continue;
    }
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (cells.size() != data.header.size()) throw Error(where + ": expected " + std::to_string(data.header.size()) + " fields");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_cell(c, where));
    data.rows.push_back(std::move(row));
  }
  if (data.header.empty()) throw Error(path.string() + ": empty file");
  return data;
}

}  // namespace entrot::cli
