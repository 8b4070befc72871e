#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "entrot/cli/config.hpp"
#include "entrot/cli/report.hpp"

namespace entrot::cli {

struct RunOptions {
  std::optional<std::filesystem::path> out;  ///< overrides the config's output
  std::optional<std::uint64_t> seed;         ///< overrides run.seed
  bool quiet = false;
};

/// Everything a run writes, keyed by file name.
struct Artifacts {
  std::string trace_csv;
  std::string plot_csv;
  RunReport report{"?"};
};

Artifacts execute(const ExperimentConfig& cfg);

/// Loads, executes and writes trace.csv, plot.csv, report.json and summary.md.
/// Returns the process exit code; errors are reported on `err` with exit 1.
int run(const std::filesystem::path& config, const RunOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace entrot::cli
