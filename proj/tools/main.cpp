#include <iostream>

#include <CLI11.hpp>

#include "entrot/cli/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Entropic optimal transport experiments: Sinkhorn traces and inequality checks"};
  std::string config, out;
  std::uint64_t seed = 0;
  bool quiet = false;
  app.add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("--out", out, "output directory (overrides config)");
  auto* seed_opt = app.add_option("--seed", seed, "seed (overrides run.seed)");
  app.add_flag("--quiet", quiet, "no progress output");
  CLI11_PARSE(app, argc, argv);

  entrot::cli::RunOptions opts;
  if (*out_opt) opts.out = out;
  if (*seed_opt) opts.seed = seed;
  opts.quiet = quiet;
  return entrot::cli::run(config, opts, std::cout, std::cerr);
}
