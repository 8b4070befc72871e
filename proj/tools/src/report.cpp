#include "entrot/cli/report.hpp"

namespace entrot::cli {

CheckResult from_report(const CheckReport& rep, Grade grade) {
  CheckResult c;
  c.name = rep.name;
  c.anchor = rep.anchor;
  c.grade = grade;
  c.rows = rep.rows.size();
  c.failures = rep.failures;
  c.pass = rep.pass;
  c.detail = rep.note;
  return c;
}

int RunReport::exit_code() const {
  bool finding = !notes_.empty();
  for (const auto& c : checks_) {
    if (c.pass) continue;
    if (c.grade == Grade::Hard) return 1;
    finding = true;
  }
  return finding ? 2 : 0;
}

Json RunReport::json() const {
  Json j;
  j["command"] = command_;
  j["exit_code"] = exit_code();
  Json checks = Json::array();
  for (const auto& c : checks_) {
    Json r;
    r["name"] = c.name;
    r["anchor"] = c.anchor;
    r["grade"] = c.grade == Grade::Hard ? "hard" : "finding";
    r["rows"] = c.rows;
    r["failures"] = c.failures;
    r["pass"] = c.pass;
    r["detail"] = c.detail;
    checks.push_back(std::move(r));
  }
  j["checks"] = std::move(checks);
  j["findings"] = notes_;
  j["data"] = data_;
  return j;
}

std::string RunReport::summary_markdown() const {
  std::string s = "# entrot " + command_ + "\n\n";
  s += "| check | anchor | grade | rows | failures | status | detail |\n";
  s += "|---|---|---|---|---|---|---|\n";
  for (const auto& c : checks_) {
    s += "| " + c.name + " | " + c.anchor + " | " + (c.grade == Grade::Hard ? "hard" : "finding") + " | " +
         std::to_string(c.rows) + " | " + std::to_string(c.failures) + " | " + (c.pass ? "pass" : "FAIL") + " | " +
         c.detail + " |\n";
  }
  if (!notes_.empty()) {
    s += "\nFindings:\n\n";
    for (const auto& n : notes_) s += "- " + n + "\n";
  }
  s += "\nExit code: " + std::to_string(exit_code()) + "\n";
  return s;
}

}  // namespace entrot::cli
