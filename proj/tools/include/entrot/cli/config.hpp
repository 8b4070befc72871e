#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "entrot/annealing.hpp"
#include "entrot/cli/io.hpp"
#include "entrot/diagnostics.hpp"
#include "entrot/measure.hpp"
#include "entrot/sinkhorn.hpp"

namespace entrot::cli {

enum class Command { Solve, Gaussian, Anneal, Stats, Verify };

std::string to_string(Command c);

/// Read-only view of a JSON object that reports errors as
/// "file: dotted.key: message".
class Node {
 public:
  Node(const Json& j, std::string file, std::string path = "");

  bool has(const std::string& key) const;
  Node child(const std::string& key) const;
  std::optional<Node> optional_child(const std::string& key) const;
  std::vector<Node> items() const;  ///< elements of an array node

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  double positive(const std::string& key) const;
  double positive(const std::string& key, double fallback) const;
  std::size_t count(const std::string& key) const;
  std::size_t count(const std::string& key, std::size_t fallback) const;
  std::uint64_t u64(const std::string& key, std::uint64_t fallback) const;
  std::string text(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  Vector numbers(const std::string& key) const;
  std::vector<Point> points(const std::string& key) const;

  bool is_string() const { return j_->is_string(); }
  bool is_array() const { return j_->is_array(); }
  std::string as_text() const;
  const Json& json() const { return *j_; }
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const;

 private:
  const Json& at(const std::string& key) const;
  std::string where(const std::string& key) const;

  const Json* j_;
  std::string file_;
  std::string path_;
};

struct ExperimentConfig {
  Command command = Command::Solve;
  std::filesystem::path file;      ///< config path; relative inputs resolve against its directory
  Json raw;
  std::uint64_t seed = 0;
  std::filesystem::path output;    ///< empty when neither config nor flag sets it

  Node root() const { return Node(raw, file.string()); }
  std::filesystem::path resolve(const std::string& p) const;
};

ExperimentConfig load_config(const std::filesystem::path& path);

/// `problem` block: mu, nu, cost, lambda.
Problem build_problem(const ExperimentConfig& cfg, const Node& problem);

DiscreteMeasure build_measure(const ExperimentConfig& cfg, const Node& m, std::uint64_t seed);
Density build_density(const Node& d);
Schedule build_schedule(const Node& s);
AssumptionTag build_assumption(const Node& check);

}  // namespace entrot::cli
