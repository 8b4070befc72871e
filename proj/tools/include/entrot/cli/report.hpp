#pragma once

#include <string>
#include <vector>

#include "entrot/cli/io.hpp"
#include "entrot/diagnostics.hpp"

namespace entrot::cli {

/// Hard checks gate the exit code; findings are hypothesis-sensitive and
/// only downgrade it to 2.
enum class Grade { Hard, Finding };

struct CheckResult {
  std::string name;
  std::string anchor;
  Grade grade = Grade::Hard;
  std::size_t rows = 0;
  std::size_t failures = 0;
  bool pass = true;
  std::string detail;
};

CheckResult from_report(const CheckReport& rep, Grade grade);

class RunReport {
 public:
  explicit RunReport(std::string command) : command_(std::move(command)) {}

  void add(CheckResult c) { checks_.push_back(std::move(c)); }
  void note(std::string finding) { notes_.push_back(std::move(finding)); }
  Json& data() { return data_; }

  const std::vector<CheckResult>& checks() const { return checks_; }

  /// 0 when every check passes, 1 when a hard check fails, 2 when only
  /// findings (or notes) are raised.
  int exit_code() const;

  Json json() const;
  std::string summary_markdown() const;

 private:
  std::string command_;
  std::vector<CheckResult> checks_;
  std::vector<std::string> notes_;
  Json data_ = Json::object();
};

}  // namespace entrot::cli
